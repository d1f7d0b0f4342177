// eqfit: least-squares equidistant tree fitting from a distance matrix.
//
// Subcommands:
//   fit      fit a tree (upgma | extended | exact | brute)
//   census   sample the n=4 arrangement of projection cones
//   witness  emit the comb witness matrix and its strict cone set
//
// Exit codes: 0 success, 2 usage/input error, 3 capacity exceeded.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "eqtree/fan.hpp"
#include "eqtree/io.hpp"
#include "eqtree/search.hpp"
#include "eqtree/upgma.hpp"
#include "json.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw eqtree::ParseError("cannot open input file '" + path + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_fit(const std::string& method, const std::string& input_path,
            const std::string& format, const std::string& output,
            bool list_cones, bool exact_rational) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();

  eqtree::DissimilarityMap d = eqtree::parse_distance_matrix(
      read_input(input_path),
      format == "csv" ? eqtree::MatrixFormat::Csv : eqtree::MatrixFormat::Phylip);

  eqtree::UpgmaTrace trace = eqtree::upgma(d);
  eqtree::ProjectionOutcome outcome;
  eqtree::RunStats stats;
  std::optional<std::string> exact_error;

  if (method == "upgma") {
    outcome = trace.result;
    stats.visited_chains = 1;
  } else if (method == "extended") {
    eqtree::ExtendedUpgmaResult res = eqtree::extended_upgma(d);
    outcome = res.best;
    stats.visited_chains = res.visited_count;
  } else if (method == "exact") {
    eqtree::SearchStats ss;
    outcome = eqtree::exact_search(d, &ss);
    stats.dp_edges = ss.dp_edges;
    stats.dp_pruned = ss.dp_pruned;
  } else {
    outcome = eqtree::brute_force_optimum(d);
    stats.visited_chains = eqtree::chain_count(d.n());
  }
  if (exact_rational && (method == "exact" || method == "brute")) {
    auto rv = eqtree::rational_values(d.values);
    eqtree::exact::ProjectionOutcome ro =
        method == "exact" ? eqtree::exact::exact_search(rv, d.n())
                          : eqtree::exact::brute_force_optimum(rv, d.n());
    exact_error = eqtree::rational_to_string(ro.squared_error);
  }

  eqtree::EquidistantTree tree = eqtree::tree_from_ultrametric(
      eqtree::Ultrametric{outcome.chain, outcome.levels}, d.taxa);
  std::string newick = eqtree::emit_newick(tree);
  auto t1 = clock::now();

  if (output == "newick") {
    std::cout << newick << "\n";
    return 0;
  }
  eqtree::RunReport rep;
  rep.n = d.n();
  rep.taxa = d.taxa.labels;
  rep.checksum = eqtree::input_checksum(d);
  rep.method = method;
  rep.chain = eqtree::chain_key_string(outcome.chain);
  rep.topology = eqtree::chain_topology(outcome.chain, d.taxa.labels);
  rep.newick = newick;
  rep.levels = outcome.levels;
  rep.squared_error = outcome.squared_error;
  rep.upgma_squared_error = trace.result.squared_error;
  rep.improvement_over_upgma =
      trace.result.squared_error - outcome.squared_error;
  rep.stats = stats;
  rep.stats.wall_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (list_cones) {
    std::vector<std::string> cones;
    for (const auto& t : eqtree::projection_cone_set(d).topologies)
      cones.push_back(t);
    rep.cone_set = std::move(cones);
  }
  rep.squared_error_exact = exact_error;
  std::cout << eqtree::report_to_json(rep);
  return 0;
}

int run_census(int n, std::uint64_t samples, std::uint64_t seed, int threads) {
  if (n != 4)
    throw eqtree::CapacityError("census is implemented for n = 4 only");
  std::cout << eqtree::census_to_json(eqtree::q4_census(samples, seed, threads));
  return 0;
}

int run_witness(int n, double a, double b) {
  eqtree::DissimilarityMap d = eqtree::comb_witness(n, a, b);
  nlohmann::json j;
  j["n"] = n;
  j["a"] = a;
  j["b"] = b;
  j["phylip"] = eqtree::serialize_phylip(d);
  if (n <= eqtree::kConeSetCap) {
    eqtree::ConeSet strict = eqtree::projection_cone_set(d, /*strict=*/true);
    j["strict_cone_set_size"] = strict.topologies.size();
    j["strict_topologies"] = std::vector<std::string>(strict.topologies.begin(),
                                                      strict.topologies.end());
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"least-squares equidistant tree fitting"};
  app.require_subcommand(1);

  std::string method = "upgma", input_path, format = "phylip", output = "json";
  bool list_cones = false, exact_rational = false;
  int threads = 0;
  auto* fit = app.add_subcommand("fit", "fit a tree to a distance matrix");
  fit->add_option("--method", method, "upgma | extended | exact | brute")
      ->check(CLI::IsMember({"upgma", "extended", "exact", "brute"}));
  fit->add_option("--input", input_path, "matrix file, '-' for stdin")
      ->required();
  fit->add_option("--format", format, "phylip | csv")
      ->check(CLI::IsMember({"phylip", "csv"}));
  fit->add_option("--output", output, "newick | json")
      ->check(CLI::IsMember({"newick", "json"}));
  fit->add_flag("--list-cones", list_cones,
                "include the cone set P_d in the report (small n only)");
  fit->add_flag("--exact-rational", exact_rational,
                "recompute the optimum in rational arithmetic (exact | brute)");
  fit->add_option("--threads", threads, "solver thread count (0 = all cores)");

  int census_n = 4;
  std::uint64_t samples = 1000000, seed = 7;
  auto* census = app.add_subcommand("census", "n=4 cone-arrangement census");
  census->add_option("--n", census_n, "taxon count (4)");
  census->add_option("--samples", samples, "uniform sample count");
  census->add_option("--seed", seed, "random seed");
  census->add_option("--threads", threads, "thread count (0 = all cores)");

  int witness_n = 4;
  double wa = 0.0, wb = 1.0;
  auto* witness = app.add_subcommand("witness", "comb witness matrix");
  witness->add_option("--n", witness_n, "taxon count")->required();
  witness->add_option("--a", wa, "distance from taxon 1");
  witness->add_option("--b", wb, "distance between the others");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*fit)
      return run_fit(method, input_path, format, output, list_cones,
                     exact_rational);
    if (*census) return run_census(census_n, samples, seed, threads);
    return run_witness(witness_n, wa, wb);
  } catch (const eqtree::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const eqtree::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

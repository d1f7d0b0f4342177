#include "eqtree/fan.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace eqtree {

ConeSet projection_cone_set(const DissimilarityMap& d, bool strict) {
  if (d.n() > kConeSetCap)
    throw CapacityError("cone set capped at n = " + std::to_string(kConeSetCap));
  ConeSet cs;
  cs.data = d;
  enumerate_chains(d.n(), [&](const MergeChain& c) {
    if (in_projection_cone(d, c, strict)) {
      cs.chains.insert(chain_key_string(c));
      cs.topologies.insert(chain_topology(c, d.taxa.labels));
    }
  });
  return cs;
}

DissimilarityMap comb_witness(int n, double a, double b) {
  if (n < 3) throw InvalidWitnessError("comb witness needs n >= 3");
  if (!(a < b)) throw InvalidWitnessError("comb witness needs a < b");
  std::vector<double> values(pair_count(n), b);
  for (int j = 1; j < n; ++j) values[pair_index(0, j, n)] = a;
  return make_dissimilarity(default_taxa(n), std::move(values));
}

// ---------------------------------------------------------------------------
// Deterministic per-sample random streams (thread-count independent).

namespace {

struct SplitMix {
  std::uint64_t state;

  explicit SplitMix(std::uint64_t seed, std::uint64_t index)
      : state(seed ^ ((index + 1) * 0x9E3779B97F4A7C15ull)) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Box-Muller; caches the second variate.
  bool have_spare = false;
  double spare = 0.0;
  double gaussian() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586476925286766559 * u2;
    spare = r * std::sin(t);
    have_spare = true;
    return r * std::cos(t);
  }
};

// Gaussian point on the unit sphere of the quotient modulo the all-ones line.
bool quotient_sphere_point(SplitMix& rng, std::vector<double>& out) {
  double mean = 0.0;
  for (double& v : out) {
    v = rng.gaussian();
    mean += v;
  }
  mean /= static_cast<double>(out.size());
  double norm2 = 0.0;
  for (double& v : out) {
    v -= mean;
    norm2 += v * v;
  }
  if (norm2 < 1e-24) return false;
  double inv = 1.0 / std::sqrt(norm2);
  for (double& v : out) v *= inv;
  return true;
}

// Precomputed membership data for every maximal chain at a given n.
struct ChainTable {
  int n;
  struct Entry {
    std::vector<std::vector<std::uint32_t>> levels;
    int topo = 0;             // index into `topologies`
    std::string key;          // canonical chain encoding
  };
  std::vector<Entry> entries;
  std::vector<std::string> topologies;  // sorted

  explicit ChainTable(int n_) : n(n_) {
    std::vector<std::string> raw;
    enumerate_chains(n, [&](const MergeChain& c) {
      Entry e;
      e.levels = level_sets(c);
      e.key = chain_key_string(c);
      entries.push_back(std::move(e));
      raw.push_back(chain_topology(c));
    });
    topologies = raw;
    std::sort(topologies.begin(), topologies.end());
    topologies.erase(std::unique(topologies.begin(), topologies.end()),
                     topologies.end());
    for (std::size_t i = 0; i < entries.size(); ++i)
      entries[i].topo = static_cast<int>(
          std::lower_bound(topologies.begin(), topologies.end(), raw[i]) -
          topologies.begin());
  }

  // Membership of x in every projection cone. `boundary` is set when any
  // inequality slack of any chain is within tolerance of zero, i.e. when the
  // closed and strict memberships could disagree.
  void evaluate(const std::vector<double>& x, double tol,
                std::uint32_t& topo_mask, std::uint32_t& chain_mask,
                std::uint32_t& strict_topo_mask, bool& boundary) const {
    topo_mask = chain_mask = strict_topo_mask = 0;
    boundary = false;
    for (std::size_t c = 0; c < entries.size(); ++c) {
      const auto& lv = entries[c].levels;
      bool closed = true, strict = true;
      double prev = 0.0;
      for (std::size_t k = 0; k < lv.size() && closed; ++k) {
        double s = 0.0;
        for (std::uint32_t p : lv[k]) s += x[p];
        double avg = s / static_cast<double>(lv[k].size());
        if (k > 0) {
          double slack = avg - prev;
          if (std::abs(slack) <= tol) boundary = true;
          if (slack < -tol) closed = false;
          if (!(slack > tol)) strict = false;
        }
        prev = avg;
      }
      if (closed) {
        topo_mask |= 1u << entries[c].topo;
        chain_mask |= 1u << c;
        if (strict) strict_topo_mask |= 1u << entries[c].topo;
      }
    }
  }

  // Distinct facet normals of the arrangement, as unit vectors of the
  // quotient. Normal of the inequality avg(L_{k+1}) >= avg(L_k), scaled to
  // integers and canonicalized before deduplication.
  std::vector<std::vector<double>> distinct_normals() const {
    std::set<std::vector<long long>> seen;
    std::size_t m = pair_count(n);
    for (const auto& e : entries)
      for (std::size_t k = 0; k + 1 < e.levels.size(); ++k) {
        std::vector<long long> v(m, 0);
        long long a = static_cast<long long>(e.levels[k].size());
        long long b = static_cast<long long>(e.levels[k + 1].size());
        for (std::uint32_t p : e.levels[k + 1]) v[p] += a;
        for (std::uint32_t p : e.levels[k]) v[p] -= b;
        long long g = 0;
        for (long long t : v) g = std::gcd(g, std::abs(t));
        long long lead = 0;
        for (long long t : v)
          if (t != 0) {
            lead = t;
            break;
          }
        for (long long& t : v) t = (lead < 0 ? -t : t) / g;
        seen.insert(std::move(v));
      }
    std::vector<std::vector<double>> out;
    for (const auto& v : seen) {
      std::vector<double> u(v.begin(), v.end());
      double norm2 = 0.0;
      for (double t : u) norm2 += t * t;
      double inv = 1.0 / std::sqrt(norm2);
      for (double& t : u) t *= inv;
      out.push_back(std::move(u));
    }
    return out;
  }
};

// Projection of p onto the intersection of the chosen hyperplanes, then a
// small push into an adjacent full-dimensional cell. Returns false when the
// construction degenerates.
bool boundary_probe(SplitMix& rng, const std::vector<std::vector<double>>& normals,
                    std::vector<double>& point) {
  std::size_t m = point.size();
  int k = 2 + static_cast<int>(rng.next() % 3);
  k = std::min<int>(k, static_cast<int>(normals.size()));
  std::vector<std::size_t> picked;
  while (static_cast<int>(picked.size()) < k) {
    std::size_t idx = rng.next() % normals.size();
    if (std::find(picked.begin(), picked.end(), idx) == picked.end())
      picked.push_back(idx);
  }
  if (!quotient_sphere_point(rng, point)) return false;
  // Gram-Schmidt the picked normals, dropping dependent ones.
  std::vector<std::vector<double>> basis;
  for (std::size_t idx : picked) {
    std::vector<double> q = normals[idx];
    for (const auto& e : basis) {
      double dot = std::inner_product(q.begin(), q.end(), e.begin(), 0.0);
      for (std::size_t t = 0; t < m; ++t) q[t] -= dot * e[t];
    }
    double norm2 = std::inner_product(q.begin(), q.end(), q.begin(), 0.0);
    if (norm2 < 1e-12) continue;
    double inv = 1.0 / std::sqrt(norm2);
    for (double& t : q) t *= inv;
    basis.push_back(std::move(q));
  }
  for (const auto& e : basis) {
    double dot = std::inner_product(point.begin(), point.end(), e.begin(), 0.0);
    for (std::size_t t = 0; t < m; ++t) point[t] -= dot * e[t];
  }
  double norm2 =
      std::inner_product(point.begin(), point.end(), point.begin(), 0.0);
  if (norm2 < 1e-18) return false;
  double inv = 1.0 / std::sqrt(norm2);
  for (double& t : point) t *= inv;
  double eps = std::pow(10.0, -7.0 + 6.0 * rng.uniform());
  std::vector<double> dir(m);
  if (!quotient_sphere_point(rng, dir)) return false;
  for (std::size_t t = 0; t < m; ++t) point[t] += eps * dir[t];
  return true;
}

// Action of a taxon permutation on pair coordinates.
std::vector<double> permute_pairs(const std::vector<double>& x,
                                  const std::array<int, 4>& perm, int n) {
  std::vector<double> out(x.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int a = perm[i], b = perm[j];
      if (a > b) std::swap(a, b);
      out[pair_index(a, b, n)] = x[pair_index(i, j, n)];
    }
  return out;
}

std::vector<std::array<int, 4>> s4_permutations() {
  std::array<int, 4> p{0, 1, 2, 3};
  std::vector<std::array<int, 4>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("EQFIT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

constexpr std::uint64_t kStructuredProbes = 200000;

}  // namespace

CensusReport q4_census(std::uint64_t samples, std::uint64_t seed, int threads) {
  static const ChainTable table(4);
  CensusReport rep;
  rep.samples = samples;
  rep.seed = seed;

  struct Local {
    std::uint64_t discarded = 0;
    std::map<int, std::uint64_t> hits;
    std::map<int, std::set<std::uint32_t>> masks_by_card;
    std::map<std::uint32_t, std::vector<double>> six_witness;
    std::set<std::uint32_t> chain_six;
    int max_card = 0;
  };

  int nthreads = resolve_threads(threads);
  std::vector<Local> locals(nthreads);
  auto worker = [&](int t, std::uint64_t lo, std::uint64_t hi) {
    Local& loc = locals[t];
    std::vector<double> x(6);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      SplitMix rng(seed, idx);
      if (!quotient_sphere_point(rng, x)) {
        ++loc.discarded;
        continue;
      }
      std::uint32_t topo_mask, chain_mask, strict_mask;
      bool boundary;
      table.evaluate(x, kConeTolerance, topo_mask, chain_mask, strict_mask,
                     boundary);
      if (boundary) {
        ++loc.discarded;
        continue;
      }
      int card = std::popcount(topo_mask);
      loc.max_card = std::max(loc.max_card, card);
      ++loc.hits[card];
      loc.masks_by_card[card].insert(topo_mask);
      if (card == 6) {
        loc.six_witness.emplace(topo_mask, x);
        loc.chain_six.insert(chain_mask);
      }
    }
  };
  {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (samples + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      std::uint64_t lo = std::min<std::uint64_t>(samples, t * chunk);
      std::uint64_t hi = std::min<std::uint64_t>(samples, lo + chunk);
      pool.emplace_back(worker, t, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  // Merge in thread order so the retained witnesses are thread-count
  // independent (chunks are contiguous index ranges).
  std::map<std::uint32_t, std::vector<double>> six_witness;
  std::set<std::uint32_t> chain_six;
  std::map<int, std::set<std::uint32_t>> masks_by_card;
  for (const Local& loc : locals) {
    rep.discarded_boundary += loc.discarded;
    rep.max_cardinality = std::max(rep.max_cardinality, loc.max_card);
    for (auto& [card, cnt] : loc.hits) rep.sample_hits_by_cardinality[card] += cnt;
    for (auto& [card, s] : loc.masks_by_card)
      masks_by_card[card].insert(s.begin(), s.end());
    for (auto& [mask, w] : loc.six_witness) six_witness.emplace(mask, w);
    chain_six.insert(loc.chain_six.begin(), loc.chain_six.end());
  }
  for (auto& [card, s] : masks_by_card)
    rep.distinct_sets_by_cardinality[card] = s.size();
  rep.distinct_six_sets_uniform = six_witness.size();

  // Structured pass: probes near low-dimensional strata of the arrangement.
  static const std::vector<std::vector<double>> normals =
      table.distinct_normals();
  {
    std::vector<double> x(6);
    for (std::uint64_t idx = 0; idx < kStructuredProbes; ++idx) {
      SplitMix rng(seed ^ 0x5BF03635DE1AA5B1ull, idx);
      if (!boundary_probe(rng, normals, x)) continue;
      std::uint32_t topo_mask, chain_mask, strict_mask;
      bool boundary;
      table.evaluate(x, kConeTolerance, topo_mask, chain_mask, strict_mask,
                     boundary);
      if (boundary) continue;
      int card = std::popcount(topo_mask);
      rep.max_cardinality = std::max(rep.max_cardinality, card);
      if (card == 6) {
        six_witness.emplace(topo_mask, x);
        chain_six.insert(chain_mask);
      }
    }
  }

  // Relabeling closure: the image of a witness under a taxon permutation is a
  // witness of the permuted cell, and gets re-evaluated from scratch.
  {
    static const auto perms = s4_permutations();
    std::vector<std::uint32_t> queue;
    for (auto& [mask, w] : six_witness) queue.push_back(mask);
    while (!queue.empty()) {
      std::uint32_t mask = queue.back();
      queue.pop_back();
      std::vector<double> w = six_witness.at(mask);
      for (const auto& perm : perms) {
        std::vector<double> pw = permute_pairs(w, perm, 4);
        std::uint32_t topo_mask, chain_mask, strict_mask;
        bool boundary;
        table.evaluate(pw, kConeTolerance, topo_mask, chain_mask, strict_mask,
                       boundary);
        if (boundary || std::popcount(topo_mask) != 6) continue;
        chain_six.insert(chain_mask);
        if (six_witness.emplace(topo_mask, pw).second) queue.push_back(topo_mask);
      }
    }
  }

  rep.distinct_six_sets = six_witness.size();
  rep.distinct_six_sets_chain_granular = chain_six.size();
  for (auto& [mask, w] : six_witness) {
    std::vector<std::string> names;
    for (int t = 0; t < static_cast<int>(table.topologies.size()); ++t)
      if (mask >> t & 1) names.push_back(table.topologies[t]);
    rep.six_sets.push_back(std::move(names));
  }
  std::sort(rep.six_sets.begin(), rep.six_sets.end());

  const auto& reps = q4_orbit_representatives();
  std::set<std::vector<std::string>> found(rep.six_sets.begin(),
                                           rep.six_sets.end());
  for (std::size_t r = 0; r < reps.size(); ++r) {
    std::vector<std::string> sorted_rep = reps[r];
    std::sort(sorted_rep.begin(), sorted_rep.end());
    rep.orbit_representative_hit[r] = found.count(sorted_rep) > 0;
  }
  return rep;
}

const std::array<std::vector<std::string>, 10>& q4_orbit_representatives() {
  static const std::array<std::vector<std::string>, 10> reps = {{
      {"(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((1,3),4),2)",
       "(((1,4),2),3)", "(((1,4),3),2)"},
      {"(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((1,3),4),2)",
       "(((1,4),2),3)", "((1,4),(2,3))"},
      {"(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((1,4),2),3)",
       "((1,3),(2,4))", "((1,4),(2,3))"},
      {"(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((1,4),3),2)",
       "(((2,4),1),3)", "((1,3),(2,4))"},
      {"(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((2,3),4),1)",
       "(((2,4),3),1)", "((1,3),(2,4))"},
      {"(((1,2),3),4)", "(((1,2),4),3)", "(((1,3),2),4)", "(((2,4),1),3)",
       "((1,3),(2,4))", "((1,4),(2,3))"},
      {"(((1,2),3),4)", "(((1,3),2),4)", "(((1,4),2),3)", "(((2,4),1),3)",
       "((1,3),(2,4))", "((1,4),(2,3))"},
      {"(((1,2),3),4)", "(((1,3),2),4)", "(((2,4),1),3)", "(((3,4),1),2)",
       "((1,2),(3,4))", "((1,3),(2,4))"},
      {"(((1,2),3),4)", "(((1,3),2),4)", "(((2,4),1),3)", "(((3,4),2),1)",
       "((1,2),(3,4))", "((1,3),(2,4))"},
      {"(((1,2),3),4)", "(((1,3),2),4)", "(((2,4),3),1)", "(((3,4),2),1)",
       "((1,2),(3,4))", "((1,3),(2,4))"},
  }};
  return reps;
}

ConjectureProbeReport conjecture_probe(int n, std::uint64_t samples,
                                       std::uint64_t seed) {
  if (n < 3) throw DegenerateInputError("conjecture probe needs n >= 3");
  if (n > kConjectureProbeCap)
    throw CapacityError("conjecture probe capped at n = " +
                        std::to_string(kConjectureProbeCap));
  ChainTable table(n);
  ConjectureProbeReport rep;
  rep.n = n;
  rep.samples = samples;
  std::size_t m = pair_count(n);
  std::vector<double> x(m);
  auto consider = [&](const std::vector<double>& pt) {
    // Strict membership per topology: cardinality at generic points.
    std::set<int> topos;
    for (const auto& e : table.entries) {
      bool strict = true;
      double prev = 0.0;
      for (std::size_t k = 0; k < e.levels.size() && strict; ++k) {
        double s = 0.0;
        for (std::uint32_t p : e.levels[k]) s += pt[p];
        double avg = s / static_cast<double>(e.levels[k].size());
        if (k > 0 && !(avg - prev > kConeTolerance)) strict = false;
        prev = avg;
      }
      if (strict) topos.insert(e.topo);
    }
    int card = static_cast<int>(topos.size());
    if (card > rep.max_strict_cardinality) {
      rep.max_strict_cardinality = card;
      rep.attaining_vector = pt;
    }
  };
  for (std::uint64_t idx = 0; idx < samples; ++idx) {
    SplitMix rng(seed, idx);
    if (!quotient_sphere_point(rng, x)) continue;
    consider(x);
  }
  auto normals = table.distinct_normals();
  for (std::uint64_t idx = 0; idx < samples / 5; ++idx) {
    SplitMix rng(seed ^ 0x5BF03635DE1AA5B1ull, idx);
    if (!boundary_probe(rng, normals, x)) continue;
    consider(x);
  }
  return rep;
}

}  // namespace eqtree

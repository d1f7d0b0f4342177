#ifndef EQTREE_ISOTONIC_HPP
#define EQTREE_ISOTONIC_HPP

#include <cstddef>
#include <vector>

namespace eqtree {

// Weighted least-squares isotonic (nondecreasing) regression by
// pool-adjacent-violators. Returns the fitted value per position; pooled
// positions share their weighted mean. Works for double and Rational.
template <typename S>
std::vector<S> isotonic_fit(const std::vector<S>& values,
                            const std::vector<S>& weights) {
  std::size_t m = values.size();
  std::vector<S> val;
  std::vector<S> wt;
  std::vector<std::size_t> len;
  val.reserve(m);
  wt.reserve(m);
  len.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    val.push_back(values[i]);
    wt.push_back(weights[i]);
    len.push_back(1);
    while (val.size() > 1 && val[val.size() - 2] > val.back()) {
      S w = wt[wt.size() - 2] + wt.back();
      S v = (val[val.size() - 2] * wt[wt.size() - 2] + val.back() * wt.back()) / w;
      val.pop_back();
      wt.pop_back();
      val.back() = v;
      wt.back() = w;
      std::size_t l = len.back();
      len.pop_back();
      len.back() += l;
    }
  }
  std::vector<S> out;
  out.reserve(m);
  for (std::size_t b = 0; b < val.size(); ++b)
    for (std::size_t k = 0; k < len[b]; ++k) out.push_back(val[b]);
  return out;
}

}  // namespace eqtree

#endif

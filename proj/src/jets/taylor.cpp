#include "jets/taylor.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace spc {
namespace {

std::uint64_t pack(const std::uint8_t* a, int dim) {
  std::uint64_t key = 0;
  for (int i = 0; i < dim; ++i) key |= std::uint64_t(a[i] & 0xf) << (4 * i);
  return key;
}

// all multi-indices of exact degree d over dim variables, lexicographic with
// the leading variable varying slowest; independent of the space's max order
void gen_degree(int dim, int d, std::vector<std::uint8_t>& cur, int at,
                std::vector<std::uint8_t>& out) {
  if (at == dim - 1) {
    cur[at] = std::uint8_t(d);
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[at] = std::uint8_t(k);
    gen_degree(dim, d - k, cur, at + 1, out);
  }
}

}  // namespace

JetSpace::JetSpace(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || dim > 16)
    throw JetError("jet dimension must be in [1, 16] (n <= 8)");
  if (order < 0 || order > 8) throw JetError("jet order must be in [0, 8]");

  std::vector<std::uint8_t> cur(dim);
  for (int d = 0; d <= order; ++d) gen_degree(dim, d, cur, 0, alphas_);

  std::size_t count = alphas_.size() / dim;
  degree_.resize(count);
  factorial_.resize(count);
  pos_.reserve(count * 2);
  for (std::size_t p = 0; p < count; ++p) {
    const std::uint8_t* a = alpha(p);
    int deg = 0;
    double fact = 1.0;
    for (int i = 0; i < dim; ++i) {
      deg += a[i];
      for (int k = 2; k <= a[i]; ++k) fact *= k;
    }
    degree_[p] = deg;
    factorial_[p] = fact;
    pos_.emplace(pack(a, dim), std::uint32_t(p));
  }

  std::vector<std::uint8_t> sum(dim);
  for (std::size_t pa = 0; pa < count; ++pa) {
    int da = degree_[pa];
    const std::uint8_t* aa = alpha(pa);
    for (std::size_t pb = 0; pb < count; ++pb) {
      if (da + degree_[pb] > order) continue;
      const std::uint8_t* ab = alpha(pb);
      for (int i = 0; i < dim; ++i) sum[i] = std::uint8_t(aa[i] + ab[i]);
      prod_.push_back({std::uint32_t(pa), std::uint32_t(pb),
                       pos_.at(pack(sum.data(), dim))});
    }
  }
}

std::size_t JetSpace::position(const std::uint8_t* a) const {
  auto it = pos_.find(pack(a, dim_));
  if (it == pos_.end())
    throw JetError("multi-index outside this jet space");
  return it->second;
}

const JetSpace& JetSpace::get(int dim, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<const JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, order);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::unique_ptr<const JetSpace>(
                                new JetSpace(dim, order)))
             .first;
  }
  return *it->second;
}

}  // namespace spc

//============================================================================
// common.hpp -- shared aliases, small numeric helpers, deterministic
// reduction utilities used across the library.
//============================================================================
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kinlab {

using cplx = std::complex<double>;

inline constexpr double PI = 3.141592653589793238462643383279502884;
inline constexpr cplx I_UNIT{0.0, 1.0};

using Vec3 = std::array<double, 3>;   // real vector, first `dim` entries used
using IVec3 = std::array<int, 3>;     // lattice vector, first `dim` entries used

inline double dot(const Vec3& a, const Vec3& b, int dim = 3) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec3& a, int dim = 3) { return std::sqrt(dot(a, a, dim)); }

inline double sq(double x) { return x * x; }

// |k| and <k> = (1+|k|^2)^{1/2} on the lattice.
inline double lat_norm(const IVec3& k, int dim = 3) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += double(k[i]) * double(k[i]);
  return std::sqrt(s);
}
inline double bracket(const IVec3& k, int dim = 3) {
  double s = 1.0;
  for (int i = 0; i < dim; ++i) s += double(k[i]) * double(k[i]);
  return std::sqrt(s);
}
inline double bracket(const Vec3& v, int dim = 3) {
  return std::sqrt(1.0 + dot(v, v, dim));
}

// Integer power (n >= 0).
inline double pow_int(double x, int n) {
  double r = 1.0, b = x;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}
inline cplx pow_int(cplx x, int n) {
  cplx r{1.0, 0.0}, b = x;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// Neumaier compensated accumulator: quadrature sums are long and the
// manifest promises a fixed reduction order, so keep the error bounded.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct KahanSumC {
  KahanSum re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : int(n);
}

// Deterministic chunked parallel map-reduce.  Work is split into fixed-size
// chunks by index; each chunk produces a partial vector of sums, and the
// partials are combined in chunk order.  The reduction result is therefore
// independent of the number of worker threads.
inline std::vector<double> parallel_chunks(
    std::int64_t n_items, std::int64_t chunk, std::size_t n_out,
    const std::function<void(std::int64_t, std::int64_t, std::vector<KahanSum>&)>& body) {
  const std::int64_t n_chunks = (n_items + chunk - 1) / chunk;
  std::vector<std::vector<KahanSum>> partial(static_cast<std::size_t>(n_chunks),
                                             std::vector<KahanSum>(n_out));
  int nt = std::min<std::int64_t>(hardware_threads(), std::max<std::int64_t>(1, n_chunks));
  std::vector<std::thread> pool;
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) break;
      std::int64_t lo = c * chunk, hi = std::min(n_items, lo + chunk);
      body(lo, hi, partial[std::size_t(c)]);
    }
  };
  if (nt == 1) {
    worker();
  } else {
    pool.reserve(std::size_t(nt));
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<KahanSum> acc(n_out);
  for (auto& p : partial)
    for (std::size_t j = 0; j < n_out; ++j) acc[j].add(p[j].value());
  std::vector<double> out(n_out);
  for (std::size_t j = 0; j < n_out; ++j) out[j] = acc[j].value();
  return out;
}

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace kinlab

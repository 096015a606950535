#include "kinlab/hermite.hpp"

#include <Eigen/Dense>
#include <map>
#include <mutex>

namespace kinlab {

double hermite_he(int n, double x) {
  if (n == 0) return 1.0;
  double hm = 1.0, h = x;
  for (int k = 1; k < n; ++k) {
    double hn = x * h - double(k) * hm;
    hm = h;
    h = hn;
  }
  return h;
}

std::vector<double> hermite_he_coeffs(int n) {
  std::vector<double> prev{1.0};
  if (n == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> nxt(std::size_t(k) + 2, 0.0);
    for (std::size_t j = 0; j < cur.size(); ++j) nxt[j + 1] += cur[j];   // x * He_k
    for (std::size_t j = 0; j < prev.size(); ++j) nxt[j] -= double(k) * prev[j];
    prev = std::move(cur);
    cur = std::move(nxt);
  }
  return cur;
}

// Golub--Welsch: eigen-decompose the Jacobi matrix of the orthogonal
// polynomial family; nodes are eigenvalues, weights are mu_0 * phi_1^2.
static Quad1D golub_welsch(const std::vector<double>& offdiag, double mu0) {
  const int n = int(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    J(i, i + 1) = offdiag[std::size_t(i)];
    J(i + 1, i) = offdiag[std::size_t(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quad1D q;
  q.x.resize(std::size_t(n));
  q.w.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    q.x[std::size_t(i)] = es.eigenvalues()(i);
    double phi = es.eigenvectors()(0, i);
    q.w[std::size_t(i)] = mu0 * phi * phi;
  }
  // Symmetrise rules with even weight to kill O(eps) node asymmetry.
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    double xs = 0.5 * (q.x[std::size_t(i)] - q.x[std::size_t(j)]);
    q.x[std::size_t(i)] = xs;
    q.x[std::size_t(j)] = -xs;
    double ws = 0.5 * (q.w[std::size_t(i)] + q.w[std::size_t(j)]);
    q.w[std::size_t(i)] = ws;
    q.w[std::size_t(j)] = ws;
  }
  return q;
}

Quad1D gauss_hermite(int n) {
  require(n >= 1, "gauss_hermite: order must be >= 1");
  static std::map<int, Quad1D> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // Physicists' Hermite: beta_k = sqrt(k/2), mu0 = sqrt(pi).
  std::vector<double> off;
  off.reserve(std::size_t(n) - 1);
  for (int k = 1; k < n; ++k) off.push_back(std::sqrt(double(k) / 2.0));
  Quad1D q = golub_welsch(off, std::sqrt(PI));
  cache[n] = q;
  return q;
}

Quad1D gauss_hermite_prob(int n) {
  Quad1D q = gauss_hermite(n);
  // x -> sqrt(2) x maps e^{-x^2} to e^{-x^2/2} with weight factor sqrt(2).
  for (auto& x : q.x) x *= std::sqrt(2.0);
  for (auto& w : q.w) w *= std::sqrt(2.0);
  return q;
}

Quad1D gauss_legendre(int n, double a, double b) {
  require(n >= 1 && b > a, "gauss_legendre: need order >= 1 and b > a");
  static std::map<int, Quad1D> cache;
  static std::mutex mtx;
  Quad1D base;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) {
      std::vector<double> off;
      off.reserve(std::size_t(n) - 1);
      for (int k = 1; k < n; ++k)
        off.push_back(double(k) / std::sqrt(4.0 * k * k - 1.0));
      base = golub_welsch(off, 2.0);
      cache[n] = base;
    } else {
      base = it->second;
    }
  }
  Quad1D q;
  q.x.resize(base.x.size());
  q.w.resize(base.w.size());
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < base.x.size(); ++i) {
    q.x[i] = mid + half * base.x[i];
    q.w[i] = half * base.w[i];
  }
  return q;
}

}  // namespace kinlab

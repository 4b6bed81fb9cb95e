#include "magprop/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "magprop/error.hpp"

namespace magprop {

FourierSeries SpectralDecomposition::eigenfunction(int k) const {
  const int M = truncation;
  FourierSeries f(M);
  const double s = 1.0 / std::sqrt(kTwoPi);
  for (int m = -M; m <= M; ++m) f.at(m) = eigenvectors(m + M, k) * s;
  return f;
}

std::vector<cplx> SpectralDecomposition::eigenfunction_samples(int k, int n) const {
  return eigenfunction(k).sample(n);
}

Eigen::MatrixXcd assemble_matrix(const AngularPotential& p, int M) {
  if (M < 1 || M < p.bandwidth())
    throw Error(ErrorKind::TruncationTooSmall, "truncation below potential bandwidth");
  const FourierSeries q = p.a() + p.A() * p.A();
  const FourierSeries& A = p.A();
  const int n = 2 * M + 1;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (int j = -M; j <= M; ++j) {
    for (int jp = -M; jp <= M; ++jp) {
      const int d = j - jp;
      cplx v = q[d] + static_cast<double>(j + jp) * A[d];
      if (d == 0) v += static_cast<double>(jp) * jp;
      H(j + M, jp + M) = v;
    }
  }
  const double asym = (H - H.adjoint()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + H.cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw Error(ErrorKind::InvalidMatrix, "assembled operator is not Hermitian");
  return 0.5 * (H + H.adjoint());
}

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= (1.0 - 1e-9) * vmax) {
      pick = i;
      break;
    }
  }
  v *= std::conj(v(pick)) / std::abs(v(pick));
}

// Replaces a degenerate block by the orthonormal basis whose members are
// dominated by distinct Fourier modes, ordered by mode index.
void canonicalize_cluster(Eigen::MatrixXcd& V, Eigen::Index first, Eigen::Index size) {
  Eigen::MatrixXcd B = V.middleCols(first, size);
  std::vector<Eigen::Index> pivots;
  Eigen::MatrixXcd R = B;
  for (Eigen::Index c = 0; c < size; ++c) {
    Eigen::Index best = 0;
    double best_norm = -1.0;
    for (Eigen::Index r = 0; r < R.rows(); ++r) {
      if (std::find(pivots.begin(), pivots.end(), r) != pivots.end()) continue;
      const double nr = R.row(r).norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = r;
      }
    }
    pivots.push_back(best);
    // Remove the chosen row direction from the remaining rows.
    Eigen::RowVectorXcd dir = R.row(best) / R.row(best).norm();
    R -= (R * dir.adjoint()) * dir;
  }
  std::sort(pivots.begin(), pivots.end());
  Eigen::MatrixXcd P(size, size);
  for (Eigen::Index c = 0; c < size; ++c) P.row(c) = B.row(pivots[static_cast<std::size_t>(c)]);
  Eigen::MatrixXcd W = B * P.inverse();
  for (Eigen::Index c = 0; c < size; ++c) {
    Eigen::VectorXcd w = W.col(c);
    for (Eigen::Index d = 0; d < c; ++d) w -= W.col(d).dot(w) * W.col(d);
    W.col(c) = w / w.norm();
  }
  V.middleCols(first, size) = W;
}

struct RawSolve {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

RawSolve hermitian_solve(const Eigen::MatrixXcd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::InvalidMatrix, "eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

SpectralDecomposition finish(const RawSolve& raw, int M, bool canonicalize) {
  SpectralDecomposition s;
  s.truncation = M;
  const Eigen::Index n = raw.values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return raw.values(a) < raw.values(b); });
  s.eigenvalues.resize(static_cast<std::size_t>(n));
  s.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues[static_cast<std::size_t>(k)] = raw.values(order[static_cast<std::size_t>(k)]);
    s.eigenvectors.col(k) = raw.vectors.col(order[static_cast<std::size_t>(k)]);
  }
  if (canonicalize) {
    Eigen::Index start = 0;
    for (Eigen::Index k = 1; k <= n; ++k) {
      const bool split = k == n || s.eigenvalues[static_cast<std::size_t>(k)] -
                                           s.eigenvalues[static_cast<std::size_t>(k - 1)] >=
                                       kDegeneracyGap;
      if (split) {
        if (k - start > 1) canonicalize_cluster(s.eigenvectors, start, k - start);
        start = k;
      }
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) fix_phase(s.eigenvectors.col(k));
  return s;
}

bool reflection_symmetric(const AngularPotential& p) {
  for (const auto& c : p.A().coefficients())
    if (std::abs(c) > 1e-14) return false;
  const double scale = 1.0 + p.a().l1_coeff_norm();
  for (const auto& c : p.a().coefficients())
    if (std::abs(c.imag()) > 1e-14 * scale) return false;
  return true;
}

SpectralDecomposition solve_parity_blocks(const Eigen::MatrixXcd& H, int M) {
  const int n = 2 * M + 1;
  const double r2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd Ue = Eigen::MatrixXcd::Zero(n, M + 1);
  Eigen::MatrixXcd Uo = Eigen::MatrixXcd::Zero(n, M);
  Ue(M, 0) = 1.0;
  for (int j = 1; j <= M; ++j) {
    Ue(M + j, j) = r2;
    Ue(M - j, j) = r2;
    Uo(M + j, j - 1) = cplx(0.0, -r2);
    Uo(M - j, j - 1) = cplx(0.0, r2);
  }
  RawSolve even = hermitian_solve(Ue.adjoint() * H * Ue);
  RawSolve odd = hermitian_solve(Uo.adjoint() * H * Uo);
  RawSolve all;
  all.values.resize(n);
  all.vectors.resize(n, n);
  all.values << even.values, odd.values;
  all.vectors << Ue * even.vectors, Uo * odd.vectors;
  return finish(all, M, false);
}

SpectralDecomposition solve_at(const AngularPotential& p, int M) {
  const Eigen::MatrixXcd H = assemble_matrix(p, M);
  if (reflection_symmetric(p)) return solve_parity_blocks(H, M);
  return finish(hermitian_solve(H), M, true);
}

}  // namespace

SpectralDecomposition eigensolve(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() % 2 != 1)
    throw Error(ErrorKind::InvalidMatrix, "matrix must be square of odd dimension");
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + matrix.cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw Error(ErrorKind::InvalidMatrix, "matrix is not Hermitian");
  const int M = static_cast<int>(matrix.rows() / 2);
  return finish(hermitian_solve(0.5 * (matrix + matrix.adjoint())), M, true);
}

SpectralDecomposition solve_spectrum(const AngularPotential& p, int M) {
  SpectralDecomposition s = solve_at(p, M);
  const int Mp = static_cast<int>(std::ceil(1.5 * M));
  const SpectralDecomposition big = solve_at(p, Mp);
  int count = 0;
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
    const double mu = s.eigenvalues[k];
    if (std::abs(mu - big.eigenvalues[k]) > kResolvedRelTol * std::max(1.0, std::abs(mu))) break;
    ++count;
  }
  s.resolved_count = count;
  return s;
}

int default_truncation(const AngularPotential& p) { return std::max(64, 8 * p.bandwidth()); }

std::vector<AbMode> ab_reference(double alpha, int k_min, int k_max) {
  std::vector<AbMode> out;
  const double s = 1.0 / std::sqrt(kTwoPi);
  for (int k = k_min; k <= k_max; ++k)
    out.push_back({k, (k + alpha) * (k + alpha), FourierSeries::single_mode(k, s)});
  return out;
}

int nearest_eigenvalue(const SpectralDecomposition& spec, double target) {
  int best = 0;
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < spec.dimension(); ++k) {
    const double dk = std::abs(spec.eigenvalues[static_cast<std::size_t>(k)] - target);
    if (dk < d) {
      d = dk;
      best = k;
    }
  }
  return best;
}

ClusterReport cluster_check(const SpectralDecomposition& spec, const AngularPotential& p, int k_min, int k_max) {
  const double Ab = p.A_bar();
  if (!(Ab > -0.5 + kResonanceTol && Ab < 0.5))
    throw Error(ErrorKind::InvalidInput, "cluster check needs A_bar in (-1/2, 1/2)");
  if (spec.resolved_count <= 0) throw Error(ErrorKind::InsufficientResolution, "spectrum is not certified");
  const int k_resolved = (spec.resolved_count - 3) / 2;
  if (k_max <= 0) k_max = k_resolved;
  if (k_max > k_resolved || k_min > k_max || k_min < 1)
    throw Error(ErrorKind::InsufficientResolution, "requested cluster range exceeds resolved eigenvalues");

  ClusterReport rep;
  rep.k_min = k_min;
  rep.k_max = k_max;
  const FourierSeries shifted = p.a() + FourierSeries::constant(Ab * Ab);
  double sup = 0.0;
  for (const auto& v : shifted.sample(std::max(512, 8 * shifted.max_mode() + 1))) sup = std::max(sup, std::abs(v));
  rep.abar = sup * sup;

  const std::vector<double>& mu = spec.eigenvalues;
  for (int k = k_min; k <= k_max; ++k) {
    const double centre = static_cast<double>(k) * k;
    std::vector<double> dist;
    dist.reserve(mu.size());
    for (double m : mu) dist.push_back(std::abs(m - centre));
    std::partial_sort(dist.begin(), dist.begin() + 2, dist.end());
    ClusterRow row;
    row.k = k;
    row.radius_without_c = std::sqrt(rep.abar + 4.0 * k * k * Ab * Ab);
    row.min_c = std::max(0.0, dist[1] - row.radius_without_c);
    rep.c = std::max(rep.c, row.min_c);
    rep.rows.push_back(row);
  }
  rep.exactly_two = true;
  rep.disjoint = true;
  const double slack = 1e-12;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    auto& row = rep.rows[i];
    const double centre = static_cast<double>(row.k) * row.k;
    const double R = rep.c + row.radius_without_c;
    row.count_in_ball = static_cast<int>(
        std::count_if(mu.begin(), mu.end(), [&](double m) { return std::abs(m - centre) <= R + slack; }));
    if (row.count_in_ball != 2) rep.exactly_two = false;
    if (i + 1 < rep.rows.size()) {
      const auto& next = rep.rows[i + 1];
      const double Rn = rep.c + next.radius_without_c;
      if (centre + R >= static_cast<double>(next.k) * next.k - Rn) rep.disjoint = false;
    }
  }
  return rep;
}

}  // namespace magprop

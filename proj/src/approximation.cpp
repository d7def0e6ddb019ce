#include "qtbasis/approximation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtb {

Eigen::VectorXcd solution_rhs(const TaylorTable& u, int n) {
  if (u.order() < n) throw std::invalid_argument("solution_rhs: table order below n");
  const std::size_t rows = index_count(n);
  Eigen::VectorXcd F(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) F(static_cast<Eigen::Index>(r)) = u.at_rank(r);
  return F;
}

FitResult fit(const BasisMatrix& M, const Eigen::VectorXcd& F, bool use_qr) {
  if (M.entries.cols() > M.entries.rows())
    throw std::invalid_argument("fit: more columns than rows");
  if (F.size() != M.entries.rows()) throw std::invalid_argument("fit: rhs size mismatch");

  FitResult out;
  if (use_qr) {
    out.weights = M.entries.colPivHouseholderQr().solve(F);
    return out;
  }

  const Eigen::MatrixXcd A = M.entries.adjoint() * M.entries;
  const Eigen::VectorXcd rhs = M.entries.adjoint() * F;
  const Eigen::LDLT<Eigen::MatrixXcd> ldlt(A);
  out.weights = ldlt.solve(rhs);
  // one refinement step; tightens the residual when A is well conditioned
  out.weights += ldlt.solve(rhs - A * out.weights);
  for (Eigen::Index k = 0; k < out.weights.size(); ++k) {
    if (!std::isfinite(out.weights(k).real()) || !std::isfinite(out.weights(k).imag())) {
      out.weights(k) = Complex{0.0, 0.0};
      out.normal_singular = true;
    }
  }
  if (ldlt.info() != Eigen::Success) out.normal_singular = true;
  return out;
}

std::vector<Point> ball_sample_points(Point x_C, double h, int samples) {
  if (h <= 0.0) throw std::invalid_argument("ball_sample_points: h must be positive");
  if (samples < 50) throw std::invalid_argument("ball_sample_points: need >= 50 samples");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(samples) * 3 + 1);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int j = 0; j < samples; ++j) {
    const double z = 1.0 - 2.0 * (j + 0.5) / samples;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * j;
    const Point d{r * std::cos(a), r * std::sin(a), z};
    for (const double rad : {h, h / 2.0, h / 4.0})
      pts.push_back({x_C[0] + rad * d[0], x_C[1] + rad * d[1], x_C[2] + rad * d[2]});
  }
  pts.push_back(x_C);
  return pts;
}

double max_error_on_ball(const PointFn& u_exact, const std::vector<BasisFunction>& basis,
                         const Eigen::VectorXcd& weights, Point x_C, double h,
                         int samples) {
  if (static_cast<std::size_t>(weights.size()) != basis.size())
    throw std::invalid_argument("max_error_on_ball: weight count mismatch");
  double worst = 0.0;
  for (const Point& x : ball_sample_points(x_C, h, samples)) {
    Complex ua{0.0, 0.0};
    for (std::size_t l = 0; l < basis.size(); ++l)
      ua += weights(static_cast<Eigen::Index>(l)) * evaluate(basis[l], x);
    worst = std::max(worst, std::abs(u_exact(x) - ua));
  }
  return worst;
}

double gradient_error_on_ball(const GradFn& grad_exact,
                              const std::vector<BasisFunction>& basis,
                              const Eigen::VectorXcd& weights, Point x_C, double h,
                              int samples) {
  if (static_cast<std::size_t>(weights.size()) != basis.size())
    throw std::invalid_argument("gradient_error_on_ball: weight count mismatch");
  double worst = 0.0;
  for (const Point& x : ball_sample_points(x_C, h, samples)) {
    CVec3 ga{Complex{0, 0}, Complex{0, 0}, Complex{0, 0}};
    for (std::size_t l = 0; l < basis.size(); ++l) {
      const CVec3 g = evaluate_gradient(basis[l], x);
      for (int k = 0; k < 3; ++k) ga[k] += weights(static_cast<Eigen::Index>(l)) * g[k];
    }
    const CVec3 ge = grad_exact(x);
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += std::norm(ge[k] - ga[k]);
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

double condition_number(const BasisMatrix& M) {
  if (M.entries.cols() < 1) throw std::invalid_argument("condition_number: empty matrix");
  const Eigen::MatrixXcd A = M.entries.adjoint() * M.entries;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smin < 1e-300) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double fit_convergence_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size())
    throw std::invalid_argument("fit_convergence_order: size mismatch");
  std::vector<double> lh, le;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (err[k] > 1e-13 && err[k] < 1e-2) {
      lh.push_back(std::log(h[k]));
      le.push_back(std::log(err[k]));
    }
  }
  if (lh.size() < 3)
    throw std::runtime_error("fit_convergence_order: too few valid points");
  double mh = 0.0, me = 0.0;
  for (std::size_t k = 0; k < lh.size(); ++k) {
    mh += lh[k];
    me += le[k];
  }
  mh /= lh.size();
  me /= lh.size();
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < lh.size(); ++k) {
    num += (lh[k] - mh) * (le[k] - me);
    den += (lh[k] - mh) * (lh[k] - mh);
  }
  return num / den;
}

const char* kind_name(BasisKind k) {
  switch (k) {
    case BasisKind::AMPLITUDE:
      return "amplitude";
    case BasisKind::PHASE:
      return "phase";
    case BasisKind::POLYNOMIAL:
      return "polynomial";
    case BasisKind::PLANE_WAVE:
      return "pw";
  }
  return "?";
}

std::vector<BasisFunction> build_study_basis(const PdeCoefficients& coeffs, int n,
                                             BasisKind kind, std::optional<Complex> s) {
  switch (kind) {
    case BasisKind::AMPLITUDE:
      return build_basis(coeffs, n, Family::AMPLITUDE, s);
    case BasisKind::PHASE:
      return build_basis(coeffs, n, Family::PHASE, s);
    case BasisKind::POLYNOMIAL:
      return build_basis(coeffs, n, Family::POLYNOMIAL, s);
    case BasisKind::PLANE_WAVE: {
      const Complex sv = s.value_or(default_s(coeffs));
      const SecondOrderStructure structure = check_hypothesis(coeffs);
      const DirectionSet dirs = generate_directions(n);
      std::vector<BasisFunction> basis;
      basis.reserve(dirs.entries.size());
      for (const DirectionSet::Entry& e : dirs.entries) {
        BasisFunction b;
        b.family = Family::AMPLITUDE;
        b.center = coeffs.center();
        b.q = 1;
        b.poly.assign(index_count(2), Complex{0.0, 0.0});
        b.poly[numbering({0, 0, 0})] = 1.0;
        b.Lambda = structure.seed_direction(sv, e.d);
        b.direction_meta = BasisFunction::DirectionMeta{e.theta, e.phi, sv};
        basis.push_back(b);
      }
      return basis;
    }
  }
  throw std::logic_error("build_study_basis: unreachable");
}

CenterStudy center_study(const TestCase& tc, BasisKind kind, int n, Point x_C,
                         const std::vector<double>& h, int samples,
                         std::optional<Complex> s) {
  const int q = std::max(n - 1, 1);
  const PdeCoefficients coeffs = case_operator(tc, x_C, std::max(q + 1, n));
  const std::vector<BasisFunction> basis = build_study_basis(coeffs, n, kind, s);
  const BasisMatrix M = assemble_matrix(basis, n);
  const Eigen::VectorXcd F = solution_rhs(solution_taylor(tc, x_C, n), n);
  const FitResult fr = fit(M, F);

  CenterStudy out;
  out.cond = condition_number(M);
  out.singular = fr.normal_singular;
  const PointFn u = [&tc](const Point& x) { return solution_value(tc, x); };
  const GradFn g = [&tc](const Point& x) { return solution_gradient(tc, x); };
  out.errors.reserve(h.size());
  out.grad_errors.reserve(h.size());
  for (const double hv : h) {
    out.errors.push_back(max_error_on_ball(u, basis, fr.weights, x_C, hv, samples));
    out.grad_errors.push_back(
        gradient_error_on_ball(g, basis, fr.weights, x_C, hv, samples));
  }
  return out;
}

ApproxReport approximation_report(const TestCase& tc, BasisKind kind, int n,
                                  const std::vector<Point>& centers,
                                  const std::vector<double>& h, int samples,
                                  std::optional<Complex> s) {
  if (centers.empty()) throw std::invalid_argument("approximation_report: no centers");
  ApproxReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.case_id = tc.id == CaseId::TC1 ? "tc1" : tc.id == CaseId::TC2 ? "tc2" : "tc3";
  rep.h = h;
  rep.max_errors.assign(h.size(), 0.0);
  rep.gradient_errors.assign(h.size(), 0.0);
  rep.cond = 0.0;
  for (const Point& c : centers) {
    const CenterStudy cs = center_study(tc, kind, n, c, h, samples, s);
    for (std::size_t k = 0; k < h.size(); ++k) {
      rep.max_errors[k] = std::max(rep.max_errors[k], cs.errors[k]);
      rep.gradient_errors[k] = std::max(rep.gradient_errors[k], cs.grad_errors[k]);
    }
    rep.cond = std::max(rep.cond, cs.cond);
  }
  try {
    rep.fitted_order = fit_convergence_order(rep.h, rep.max_errors);
  } catch (const std::runtime_error&) {
    rep.fitted_order = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace qtb

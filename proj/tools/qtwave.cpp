// Command-line harness: convergence studies, conditioning tables, invariant
// verification, and basis dumps for the quasi-Trefftz construction library.
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qtbasis/approximation.hpp"

using namespace qtb;

namespace {

constexpr int kSamples = 64;

struct Options {
  std::string case_id = "tc1";
  std::vector<std::string> families;
  int nmax = 0;  // 0 = pick the desk/full default
  int centers = 0;
  int kmax = 10;
  std::uint64_t seed = 0x5EED;
  std::string out;
  bool full = false;
  bool inject = false;
  bool list = false;
  std::vector<double> center_at;
};

CaseId parse_case(const std::string& s) {
  if (s == "tc1") return CaseId::TC1;
  if (s == "tc2") return CaseId::TC2;
  if (s == "tc3") return CaseId::TC3;
  throw CLI::ValidationError("--case", "expected tc1, tc2, or tc3");
}

const char* column_prefix(BasisKind k) {
  switch (k) {
    case BasisKind::AMPLITUDE: return "errAbGn";
    case BasisKind::PHASE: return "errPbGn";
    case BasisKind::POLYNOMIAL: return "errPstn";
    default: return "errPWfn";
  }
}

std::vector<BasisKind> resolve_families(const Options& opt, CaseId id) {
  const bool pw_ok = id == CaseId::TC1;
  std::vector<BasisKind> kinds;
  auto push = [&](BasisKind k) {
    for (BasisKind have : kinds)
      if (have == k) return;
    kinds.push_back(k);
  };
  if (opt.families.empty() || (opt.families.size() == 1 && opt.families[0] == "all")) {
    push(BasisKind::AMPLITUDE);
    push(BasisKind::PHASE);
    push(BasisKind::POLYNOMIAL);
    if (pw_ok) push(BasisKind::PLANE_WAVE);
    return kinds;
  }
  for (const std::string& f : opt.families) {
    if (f == "amplitude")
      push(BasisKind::AMPLITUDE);
    else if (f == "phase")
      push(BasisKind::PHASE);
    else if (f == "polynomial")
      push(BasisKind::POLYNOMIAL);
    else if (f == "pw") {
      if (!pw_ok)
        throw std::runtime_error("config error: the pw family needs constant coefficients "
                                 "(only tc1)");
      push(BasisKind::PLANE_WAVE);
    } else if (f == "all") {
      push(BasisKind::AMPLITUDE);
      push(BasisKind::PHASE);
      push(BasisKind::POLYNOMIAL);
      if (pw_ok) push(BasisKind::PLANE_WAVE);
    } else {
      throw std::runtime_error("config error: unknown family '" + f + "'");
    }
  }
  if (kinds.empty()) throw std::runtime_error("config error: empty family list");
  return kinds;
}

// Centers drawn uniformly in the case box. The generator output is converted
// to doubles explicitly so files are byte-identical across standard libraries.
std::vector<Point> draw_centers(const TestCase& tc, int count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto u01 = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int a = 0; a < count; ++a) {
    Point x;
    // Stay a little inside the box so every sampling ball fits.
    for (int k = 0; k < 3; ++k) {
      const double lo = tc.box_lo[k], hi = tc.box_hi[k];
      const double pad = 0.05 * (hi - lo);
      x[k] = lo + pad + (hi - lo - 2 * pad) * u01();
    }
    out.push_back(x);
  }
  return out;
}

void parallel_for(int count, const std::function<void(int)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(count));
  if (workers <= 1) {
    for (int a = 0; a < count; ++a) body(a);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int a = next.fetch_add(1); a < count; a = next.fetch_add(1)) body(a);
    });
  for (std::thread& t : pool) t.join();
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10e", v);
  return buf;
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + opt.out);
  f << text;
}

int effective_nmax(const Options& opt) {
  if (opt.nmax > 0) return opt.nmax;
  return opt.full ? 8 : 6;
}

int effective_centers(const Options& opt) {
  if (opt.centers > 0) return opt.centers;
  return opt.full ? 50 : 10;
}

int run_convergence(const Options& opt) {
  const TestCase tc = make_test_case(parse_case(opt.case_id));
  const std::vector<BasisKind> kinds = resolve_families(opt, tc.id);
  const int nmax = effective_nmax(opt);
  const std::vector<Point> centers = draw_centers(tc, effective_centers(opt), opt.seed);

  std::vector<double> h;
  for (int k = 0; k <= opt.kmax; ++k) h.push_back(2.0 * std::pow(4.0, -k));

  // errs[kind][n-1][h index] = worst error over centers
  std::vector<std::vector<std::vector<double>>> errs(
      kinds.size(), std::vector<std::vector<double>>(static_cast<std::size_t>(nmax)));
  for (std::size_t f = 0; f < kinds.size(); ++f)
    for (int n = 1; n <= nmax; ++n) {
      std::vector<CenterStudy> per_center(centers.size());
      parallel_for(static_cast<int>(centers.size()), [&](int a) {
        per_center[static_cast<std::size_t>(a)] =
            center_study(tc, kinds[f], n, centers[static_cast<std::size_t>(a)], h, kSamples);
      });
      std::vector<double> worst(h.size(), 0.0);
      for (const CenterStudy& st : per_center)
        for (std::size_t k = 0; k < h.size(); ++k)
          worst[k] = std::max(worst[k], st.errors[k]);
      errs[f][static_cast<std::size_t>(n - 1)] = std::move(worst);
    }

  std::ostringstream os;
  os << "h";
  for (std::size_t f = 0; f < kinds.size(); ++f)
    for (int n = 1; n <= nmax; ++n) os << ' ' << column_prefix(kinds[f]) << n;
  os << '\n';
  for (std::size_t k = 0; k < h.size(); ++k) {
    os << format_value(h[k]);
    for (std::size_t f = 0; f < kinds.size(); ++f)
      for (int n = 1; n <= nmax; ++n)
        os << ' ' << format_value(errs[f][static_cast<std::size_t>(n - 1)][k]);
    os << '\n';
  }
  write_output(opt, os.str());
  return 0;
}

int run_conditioning(const Options& opt) {
  const TestCase tc = make_test_case(parse_case(opt.case_id));
  const std::vector<BasisKind> kinds = resolve_families(opt, tc.id);
  const int nmax = effective_nmax(opt);
  const std::vector<Point> centers = draw_centers(tc, effective_centers(opt), opt.seed);

  // cond[f][n-1] = worst condition number of conj(M)^T M over centers
  std::vector<std::vector<double>> cond(kinds.size(),
                                        std::vector<double>(static_cast<std::size_t>(nmax)));
  for (std::size_t f = 0; f < kinds.size(); ++f)
    for (int n = 1; n <= nmax; ++n) {
      const int q = std::max(n - 1, 1);
      std::vector<double> per_center(centers.size(), 0.0);
      parallel_for(static_cast<int>(centers.size()), [&](int a) {
        const Point& x = centers[static_cast<std::size_t>(a)];
        const PdeCoefficients op = case_operator(tc, x, std::max(n, q + 1));
        const BasisMatrix M = assemble_matrix(build_study_basis(op, n, kinds[f]), n);
        per_center[static_cast<std::size_t>(a)] = condition_number(M);
      });
      double worst = 0.0;
      for (double v : per_center) worst = std::max(worst, v);
      cond[f][static_cast<std::size_t>(n - 1)] = worst;
    }

  std::ostringstream os;
  os << "n";
  for (BasisKind k : kinds) os << " cond_" << kind_name(k);
  os << '\n';
  for (int n = 1; n <= nmax; ++n) {
    os << n;
    for (std::size_t f = 0; f < kinds.size(); ++f)
      os << ' ' << format_value(cond[f][static_cast<std::size_t>(n - 1)]);
    os << '\n';
  }
  // Human-readable table on stdout; machine-readable copy to --out when given.
  std::cout << os.str();
  if (!opt.out.empty()) {
    std::ofstream fout(opt.out, std::ios::binary);
    if (!fout) throw std::runtime_error("cannot open output file: " + opt.out);
    fout << os.str();
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify: the invariant suite. Each check is self-contained and prints one
// PASS/FAIL line with its tolerance.

struct CheckResult {
  bool ok = true;
  std::string detail;
};

using CheckFn = std::function<CheckResult(const Options&)>;

CheckResult check_residuals(const Options& opt) {
  CheckResult r;
  double worst = 0.0;
  for (CaseId id : {CaseId::TC1, CaseId::TC2, CaseId::TC3}) {
    const TestCase tc = make_test_case(id);
    const Point x{0.31 * tc.box_hi[0], 0.5 * (tc.box_lo[1] + tc.box_hi[1]),
                  -0.27 * tc.box_hi[2]};
    for (int n = 1; n <= 3; ++n) {
      const int q = std::max(n - 1, 1);
      const PdeCoefficients op = case_operator(tc, x, q + 1);
      const double scale = op.scale();
      for (Family fam : {Family::AMPLITUDE, Family::PHASE, Family::POLYNOMIAL}) {
        std::vector<BasisFunction> basis = build_basis(op, n, fam);
        if (opt.inject && id == CaseId::TC1 && n == 2 && fam == Family::POLYNOMIAL)
          basis.front().poly[numbering(MultiIndex{2, 0, 0})] += Complex{1e-3, 0.0};
        for (const BasisFunction& b : basis)
          worst = std::max(worst, residual_magnitude(op, b, q) / scale);
      }
    }
  }
  r.ok = worst <= 1e-10;
  std::ostringstream os;
  os << "worst relative residual " << format_value(worst) << " (tol 1.0e-10)";
  r.detail = os.str();
  return r;
}

CheckResult check_plane_wave_reduction(const Options&) {
  const TestCase tc = make_test_case(CaseId::TC1);
  const Point x{0.2, 1.3, -0.4};
  const PdeCoefficients op = case_operator(tc, x, 5);
  const Complex s{0.0, tc.kappa};
  double worst = 0.0;
  for (const auto& en : generate_directions(2).entries) {
    const BasisFunction amp = construct_amplitude_gpw(op, 4, s, en.d);
    for (const MultiIndex& i : indices_up_to(5))
      if (i.order() > 0) worst = std::max(worst, std::abs(amp.coeff(i)));
    const BasisFunction ph = construct_phase_gpw(op, 4, s, en.d);
    for (const MultiIndex& i : indices_up_to(5))
      if (i.order() != 1) worst = std::max(worst, std::abs(ph.coeff(i)));
  }
  CheckResult r;
  r.ok = worst <= 1e-13;
  r.detail = "worst computed-layer magnitude " + format_value(worst) + " (tol 1.0e-13)";
  return r;
}

CheckResult check_ranks(const Options&) {
  const TestCase tc = make_test_case(CaseId::TC2);
  const Point x{0.5, -0.4, 0.3};
  CheckResult r;
  for (int n = 1; n <= 3; ++n) {
    const int q = std::max(n - 1, 1);
    const int p = (n + 1) * (n + 1);
    const PdeCoefficients op = case_operator(tc, x, std::max(n, q + 1));
    const SecondOrderStructure st = check_hypothesis(op);
    const DirectionSet dirs = generate_directions(n);
    const Complex s = default_s(op);
    if (numerical_rank(reference_matrix_E(n, dirs, s, st.P, st.D)) != p ||
        numerical_rank(reference_matrix_R(n, dirs)) != p) {
      r.ok = false;
      r.detail = "reference matrix rank defect at n=" + std::to_string(n);
      return r;
    }
    for (BasisKind kind : {BasisKind::AMPLITUDE, BasisKind::PHASE, BasisKind::POLYNOMIAL,
                           BasisKind::PLANE_WAVE}) {
      const BasisMatrix M = assemble_matrix(build_study_basis(op, n, kind), n);
      if (numerical_rank(M) != p) {
        r.ok = false;
        r.detail = std::string("assembled rank defect, family ") + kind_name(kind) +
                   ", n=" + std::to_string(n);
        return r;
      }
    }
  }
  r.detail = "all Taylor matrices reach rank (n+1)^2, n=1..3 (SVD cutoff 1e-8)";
  return r;
}

CheckResult check_polynomial_independence(const Options&) {
  const TestCase tc = make_test_case(CaseId::TC3);
  const Point x{0.4, 0.2, -0.6};
  CheckResult r;
  for (int q = 1; q <= 4; ++q) {
    const PdeCoefficients op = case_operator(tc, x, q + 1);
    const std::vector<MultiIndex> seeds = canonical_seeds(q);
    Eigen::MatrixXcd V(static_cast<Eigen::Index>(index_count(q + 1)),
                       static_cast<Eigen::Index>(seeds.size()));
    for (std::size_t a = 0; a < seeds.size(); ++a) {
      const BasisFunction b = construct_polynomial_qt(op, q, seeds[a]);
      for (std::size_t row = 0; row < b.poly.size(); ++row)
        V(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(a)) = b.poly[row];
    }
    if (numerical_rank(V) != static_cast<int>(seeds.size())) {
      r.ok = false;
      r.detail = "coefficient-vector rank defect at q=" + std::to_string(q);
      return r;
    }
  }
  r.detail = "coefficient vectors independent, dimension (q+2)^2, q=1..4";
  return r;
}

CheckResult check_solution_annihilation(const Options&) {
  double worst = 0.0;
  for (CaseId id : {CaseId::TC1, CaseId::TC2, CaseId::TC3}) {
    const TestCase tc = make_test_case(id);
    const Point x{0.45 * tc.box_hi[0], 0.6 * tc.box_hi[1] + 0.4 * tc.box_lo[1],
                  0.22 * tc.box_lo[2]};
    const int order = 6;
    const PdeCoefficients op = case_operator(tc, x, order);
    const TaylorTable u = solution_taylor(tc, x, order);
    const TaylorTable res = apply_operator_taylor(op, u, order - 2);
    const double scale = std::max(u.max_abs(), 1.0) * std::max(op.scale(), 1.0);
    worst = std::max(worst, res.max_abs() / scale);
  }
  CheckResult r;
  r.ok = worst <= 1e-11;
  r.detail = "worst relative table residual " + format_value(worst) + " (tol 1.0e-11)";
  return r;
}

CheckResult check_exp_derivative_identity(const Options&) {
  // The exponential series S = exp(f) must satisfy dS = df * S as truncated
  // tables, an identity independent of how S is generated.
  // degree-3 phase stored at order 4 so the derivative keeps full depth
  TaylorTable f({0, 0, 0}, 4);
  std::mt19937_64 gen(0xE5EED);
  auto u = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
  for (const MultiIndex& i : indices_up_to(3)) f[i] = Complex{u(), u()};
  const TaylorTable S = exp_series(f, 4);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const MultiIndex axis = k == 0 ? e1 : k == 1 ? e2 : e3;
    const TaylorTable lhs = derivative_table(S, axis);
    const TaylorTable rhs = taylor_product(derivative_table(f, axis), S);
    for (const MultiIndex& i : indices_up_to(3))
      worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  }
  CheckResult r;
  r.ok = worst <= 1e-11;
  r.detail = "max |dS - df*S| entry " + format_value(worst) + " (tol 1.0e-11)";
  return r;
}

CheckResult check_gradient_fd(const Options&) {
  const TestCase tc = make_test_case(CaseId::TC2);
  const Point x{0.6, -0.5, 0.9};
  const PdeCoefficients op = case_operator(tc, x, 4);
  double worst = 0.0;
  for (Family fam : {Family::AMPLITUDE, Family::PHASE, Family::POLYNOMIAL}) {
    const std::vector<BasisFunction> basis = build_basis(op, 2, fam);
    const BasisFunction& b = basis[3];
    const Point at{x[0] + 0.13, x[1] - 0.21, x[2] + 0.08};
    const CVec3 g = evaluate_gradient(b, at);
    for (int k = 0; k < 3; ++k) {
      const double step = 1e-5;
      Point hi = at, lo = at, hi2 = at, lo2 = at;
      hi[k] += step;
      lo[k] -= step;
      hi2[k] += 2 * step;
      lo2[k] -= 2 * step;
      const Complex fd = (-evaluate(b, hi2) + 8.0 * evaluate(b, hi) - 8.0 * evaluate(b, lo) +
                          evaluate(b, lo2)) /
                         (12.0 * step);
      worst = std::max(worst, std::abs(g[k] - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  CheckResult r;
  r.ok = worst <= 1e-7;
  r.detail = "worst relative gradient mismatch " + format_value(worst) + " (tol 1.0e-7)";
  return r;
}

CheckResult check_characteristic_normalization(const Options&) {
  double worst = 0.0;
  for (CaseId id : {CaseId::TC1, CaseId::TC2, CaseId::TC3}) {
    const TestCase tc = make_test_case(id);
    const Point x{0.33 * tc.box_hi[0], 0.41 * tc.box_hi[1] + 0.59 * tc.box_lo[1],
                  0.15 * tc.box_lo[2]};
    const PdeCoefficients op = case_operator(tc, x, 3);
    const Complex s = default_s(op);
    for (const BasisFunction& b : build_basis(op, 2, Family::AMPLITUDE)) {
      Complex form{0.0, 0.0};
      for (int k = 0; k < 3; ++k) {
        const MultiIndex jk = (k == 0) ? MultiIndex{2, 0, 0}
                              : (k == 1) ? MultiIndex{0, 2, 0}
                                         : MultiIndex{0, 0, 2};
        form += op.at(jk, MultiIndex{0, 0, 0}) * b.Lambda[k] * b.Lambda[k];
      }
      form += op.at(MultiIndex{1, 1, 0}, MultiIndex{0, 0, 0}) * b.Lambda[0] * b.Lambda[1];
      form += op.at(MultiIndex{1, 0, 1}, MultiIndex{0, 0, 0}) * b.Lambda[0] * b.Lambda[2];
      form += op.at(MultiIndex{0, 1, 1}, MultiIndex{0, 0, 0}) * b.Lambda[1] * b.Lambda[2];
      worst = std::max(worst, std::abs(form - s * s) / std::abs(s * s));
    }
  }
  CheckResult r;
  r.ok = worst <= 1e-12;
  r.detail = "worst |Lambda^T C Lambda - s^2| / |s^2| " + format_value(worst) +
             " (tol 1.0e-12)";
  return r;
}

int run_verify(const Options& opt) {
  const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"qt-residual", check_residuals},
      {"plane-wave-reduction", check_plane_wave_reduction},
      {"rank-theorem", check_ranks},
      {"polynomial-independence", check_polynomial_independence},
      {"solution-annihilation", check_solution_annihilation},
      {"exp-derivative-identity", check_exp_derivative_identity},
      {"gradient-fd", check_gradient_fd},
      {"characteristic-normalization", check_characteristic_normalization},
  };
  if (opt.list) {
    for (const auto& [name, fn] : checks) std::cout << name << '\n';
    return 0;
  }
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    const CheckResult r = fn(opt);
    std::cout << (r.ok ? "PASS " : "FAIL ") << name << " - " << r.detail << '\n';
    if (!r.ok) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed\n"
                              : std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? 0 : 1;
}

int run_dump(const Options& opt) {
  const TestCase tc = make_test_case(parse_case(opt.case_id));
  const std::vector<BasisKind> kinds = resolve_families(opt, tc.id);
  if (kinds.size() != 1)
    throw std::runtime_error("config error: dump-basis needs exactly one --family");
  const int n = opt.nmax > 0 ? opt.nmax : 2;
  Point x{0.5 * (tc.box_lo[0] + tc.box_hi[0]), 0.5 * (tc.box_lo[1] + tc.box_hi[1]),
          0.5 * (tc.box_lo[2] + tc.box_hi[2])};
  if (!opt.center_at.empty()) {
    for (int k = 0; k < 3; ++k) x[k] = opt.center_at[static_cast<std::size_t>(k)];
  }
  const int q = std::max(n - 1, 1);
  const PdeCoefficients op = case_operator(tc, x, std::max(n, q + 1));
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# %s n=%d center %.17g %.17g %.17g\n",
                kind_name(kinds[0]), n, x[0], x[1], x[2]);
  os << buf;
  for (const BasisFunction& b : build_study_basis(op, n, kinds[0]))
    os << serialize_basis_function(b);
  write_output(opt, os.str());
  return 0;
}

void add_common(CLI::App* cmd, Options& opt, bool with_out = true) {
  cmd->add_option("--case", opt.case_id, "test case: tc1, tc2, tc3")
      ->check(CLI::IsMember({"tc1", "tc2", "tc3"}));
  cmd->add_option("--family", opt.families,
                  "family: amplitude, phase, polynomial, pw, all (repeatable)");
  cmd->add_option("--n", opt.nmax, "largest basis order n")->check(CLI::Range(1, 8));
  cmd->add_option("--centers", opt.centers, "number of random centers")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "RNG seed for center placement");
  cmd->add_flag("--full", opt.full, "full study: n up to 8, 50 centers");
  if (with_out) cmd->add_option("--out", opt.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-Trefftz basis studies for variable-coefficient wave operators"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* conv = app.add_subcommand("convergence", "local approximation error vs h");
  add_common(conv, opt);
  conv->add_option("--kmax", opt.kmax, "finest h index: h_k = 2*4^-k, k = 0..kmax")
      ->check(CLI::Range(0, 14));

  CLI::App* cond = app.add_subcommand("conditioning", "condition of the Taylor systems");
  add_common(cond, opt);

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_flag("--list", opt.list, "print check names and exit");
  verify->add_flag("--inject-perturbation", opt.inject)->group("");  // fault injection

  CLI::App* dump = app.add_subcommand("dump-basis", "print one basis in text form");
  add_common(dump, opt);
  dump->add_option("--center", opt.center_at, "expansion point (three coordinates)")
      ->expected(3);

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) return run_convergence(opt);
    if (cond->parsed()) return run_conditioning(opt);
    if (verify->parsed()) return run_verify(opt);
    if (dump->parsed()) return run_dump(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

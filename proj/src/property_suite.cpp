#include "cframe/property_suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "cframe/error.hpp"
#include "cframe/generators.hpp"

namespace cframe {

namespace {

constexpr double kReconstructionTol = 1e-10;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

struct Case {
  int index;
  std::uint64_t seed;
  bool planted;  // controller with eig_max < 1, so ||C^{-1/2}|| > 1
  FrameFamily frame;
  GlPlusCertificate controller;
  ModuleOperator transform;  // polynomial in the controller
  ModuleOperator s;
  FrameReport report;
  ScalarBounds plain;  // optimal bounds of S
  int samples;
  ExponentVariant variant;

  const ModuleDescriptor& d() const { return frame.module(); }

  Json describe() const {
    const ModuleDescriptor& md = d();
    return {{"dim", md.dim()},
            {"structure", to_string(md.algebra.structure)},
            {"rank", md.rank},
            {"measure", to_string(frame.space().kind())},
            {"nodes", frame.size()},
            {"controller_eig_min", controller.eig_min()},
            {"controller_eig_max", controller.eig_max()},
            {"inv_sqrt_norm", controller.inv_sqrt_norm()},
            {"planted", planted}};
  }
};

MeasureSpace random_space(Rng& rng, int nodes) {
  switch (rng.uniform_int(0, 3)) {
    case 0: return gauss_legendre(0.0, 1.0, nodes);
    case 1: return nodes >= 2 ? trapezoid(0.0, 1.0, nodes) : riemann(0.0, 1.0, nodes);
    case 2: return riemann(0.0, 1.0, nodes);
    default: {
      std::vector<double> w(nodes);
      for (double& v : w) v = rng.uniform(0.5, 2.0);
      return counting(std::move(w));
    }
  }
}

// Controllers are c0 I + c1 S / ||S||, so they commute with S and S_C stays
// self-adjoint. On odd cases the controller is scaled below the identity.
Case make_case(const SuiteOptions& o, int index) {
  const std::uint64_t seed = Rng(o.seed).fork(index).next_u64();
  Rng rng(seed);
  const int n = rng.uniform_int(1, o.max_dim);
  const int k = rng.uniform_int(1, o.max_rank);
  const Structure structure = rng.uniform() < 0.5 ? Structure::Full : Structure::Diagonal;
  const ModuleDescriptor d{{n, structure}, k};
  const int nodes = rng.uniform_int(std::min(o.max_nodes, 2 * k), o.max_nodes);
  MeasureSpace space = random_space(rng, nodes);
  FrameFamily frame = FrameFamily::sample(d, std::move(space),
                                          [&](std::size_t, double) { return gen::module_element(d, rng); });

  const ModuleOperator s = frame_operator(frame);
  const double c0 = rng.uniform(0.5, 1.5), c1 = rng.uniform(0.0, 1.0);
  ModuleOperator c = op_add(ModuleOperator::scalar(d, c0), op_scale(s, c1 / op_norm(s)));
  c = ModuleOperator::projected(d, 0.5 * (c.flattened() + c.flattened().adjoint()));
  const bool planted = index % 2 == 1;
  const double top = spectral::hermitian_eigen(c.flattened()).values.maxCoeff();
  const double factor = planted ? rng.uniform(0.3, 0.9) / top : rng.uniform(1.0, 3.0);
  GlPlusCertificate cert = certify_gl_plus(op_scale(c, factor));

  const Complex k0(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0));
  const double k1 = rng.uniform(0.0, 1.0);
  ModuleOperator transform = op_add(ModuleOperator::scalar(d, k0), op_scale(cert.op(), k1));

  FrameReport report = is_controlled_frame(frame, cert);
  ScalarBounds plain{};
  if (report.is_frame) plain = optimal_scalar_bounds(s);
  return {index,      seed,          planted,   std::move(frame), std::move(cert), std::move(transform), s,
          std::move(report), plain, o.samples, o.variant};
}

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome require(bool ok, std::string detail) { return {ok, ok ? std::string() : std::move(detail)}; }

Outcome need_frame(const Case& c) { return require(c.report.is_frame, "instance is not a controlled frame"); }

StarBounds scalar_star(const AlgebraDescriptor& a, const ScalarBounds& b) {
  return {AlgebraElement::scalar(a, std::sqrt(b.lower)), AlgebraElement::scalar(a, std::sqrt(b.upper))};
}

std::vector<ModuleElement> samples(const ModuleDescriptor& d, int count, Rng& rng) {
  std::vector<ModuleElement> xs;
  xs.reserve(count);
  for (int i = 0; i < count; ++i) xs.push_back(gen::module_element(d, rng));
  return xs;
}

// ---------------------------------------------------------------- algebra

Outcome cstar_identity(const Case& c, Rng& rng) {
  const AlgebraElement a = gen::algebra_element(c.d().algebra, rng);
  const double na = operator_norm(a);
  const double gap = std::abs(operator_norm(adjoint(a) * a) - na * na);
  return require(gap <= 1e-10 * (1.0 + na * na), "| ||a*a|| - ||a||^2 | = " + fmt(gap));
}

Outcome loewner_order(const Case& c, Rng& rng) {
  const AlgebraDescriptor& ad = c.d().algebra;
  const AlgebraElement a = gen::hermitian_element(ad, rng);
  const AlgebraElement p = gen::algebra_element(ad, rng), q = gen::algebra_element(ad, rng);
  const AlgebraElement b = a + adjoint(p) * p;
  const AlgebraElement e = b + adjoint(q) * q;
  if (!loewner_leq(a, a)) return {false, "not reflexive"};
  if (!loewner_leq(a, b) || !loewner_leq(b, e)) return {false, "constructed order rejected"};
  if (!loewner_leq(a, e)) return {false, "not transitive"};
  if (loewner_leq(b, a) && max_abs_diff(a, b) > 1e-9 * std::max(1.0, operator_norm(b)))
    return {false, "not antisymmetric"};
  return {};
}

Outcome psd_sqrt_scaling(const Case& c, Rng& rng) {
  const AlgebraElement b = gen::algebra_element(c.d().algebra, rng);
  const AlgebraElement a = adjoint(b) * b;
  const double lambda = rng.uniform(0.1, 10.0);
  const AlgebraElement lhs = psd_sqrt(scale(a, lambda * lambda));
  const AlgebraElement rhs = scale(psd_sqrt(a), lambda);
  const double diff = max_abs_diff(lhs, rhs);
  return require(diff <= 1e-10 * std::max(1.0, operator_norm(rhs)), "max diff " + fmt(diff));
}

// ----------------------------------------------------------------- module

Outcome inner_product_axioms(const Case& c, Rng& rng) {
  const ModuleDescriptor& d = c.d();
  const ModuleElement x = gen::module_element(d, rng), y = gen::module_element(d, rng),
                      z = gen::module_element(d, rng);
  const AlgebraElement a = gen::algebra_element(d.algebra, rng);
  const double scale_ = std::max(1.0, (operator_norm(a) * module_norm(x) + module_norm(y)) * module_norm(z));
  const double lin = max_abs_diff(inner_product(add(act(a, x), y), z), a * inner_product(x, z) + inner_product(y, z));
  if (lin > 1e-12 * scale_) return {false, "A-linearity defect " + fmt(lin)};
  const double sym = max_abs_diff(inner_product(x, y), adjoint(inner_product(y, x)));
  if (sym > 1e-12 * std::max(1.0, module_norm(x) * module_norm(y))) return {false, "symmetry defect " + fmt(sym)};
  if (!is_positive(inner_product(x, x))) return {false, "<x,x> not positive"};
  const ModuleElement zero = ModuleElement::zero(d);
  if (operator_norm(inner_product(zero, zero)) != 0.0) return {false, "<0,0> != 0"};
  if (!(operator_norm(inner_product(x, x)) > 0.0)) return {false, "<x,x> = 0 for x != 0"};
  return {};
}

Outcome a_linearity(const Case& c, Rng& rng) {
  const ModuleDescriptor& d = c.d();
  const ModuleOperator t = gen::module_operator(d, rng);
  const ModuleElement x = gen::module_element(d, rng);
  const AlgebraElement a = gen::algebra_element(d.algebra, rng);
  const double diff = max_abs_diff(apply(t, act(a, x)), act(a, apply(t, x)));
  const double scale_ = std::max(1.0, op_norm(t) * operator_norm(a) * module_norm(x));
  return require(diff <= 1e-12 * scale_, "T(a x) - a T(x) = " + fmt(diff));
}

Outcome operator_form_bound(const Case& c, Rng& rng) {
  const ModuleOperator t = gen::module_operator(c.d(), rng);
  const ModuleElement x = gen::module_element(c.d(), rng);
  const ModuleElement tx = apply(t, x);
  const double nt = op_norm(t);
  return require(loewner_leq(inner_product(tx, tx), scale(inner_product(x, x), nt * nt)),
                 "<Tx,Tx> <= ||T||^2 <x,x> violated");
}

Outcome adjoint_lower_bound(const Case& c, Rng& rng) {
  const ModuleOperator t = gen::invertible_operator(c.d(), rng);
  if (!is_surjective(t)) return {false, "invertible operator reported not surjective"};
  const double m = spectral::smallest_singular_value(t.flattened());
  const ModuleElement x = gen::module_element(c.d(), rng);
  const ModuleElement tx = apply(op_adjoint(t), x);
  return require(loewner_leq(scale(inner_product(x, x), m * m), inner_product(tx, tx)),
                 "<T*x,T*x> >= m'<x,x> violated");
}

Outcome tt_star_bounds(const Case& c, Rng& rng) {
  const ModuleOperator t = gen::invertible_operator(c.d(), rng);
  const ModuleOperator tt = compose(t, op_adjoint(t));
  const double lower = 1.0 / op_norm(op_invert(tt));
  const double nt = op_norm(t);
  return require(sandwich_holds(tt, {lower, nt * nt}), "||(TT*)^-1||^-1 I <= TT* <= ||T||^2 I violated");
}

Outcome adjoint_identities(const Case& c, Rng& rng) {
  const ModuleDescriptor& d = c.d();
  const ModuleOperator t = gen::module_operator(d, rng), u = gen::module_operator(d, rng);
  if (op_max_abs_diff(op_adjoint(op_adjoint(t)), t) != 0.0) return {false, "adjoint is not an involution"};
  const double scale_ = std::max(1.0, op_norm(t) * op_norm(u));
  const double rev = op_max_abs_diff(op_adjoint(compose(t, u)), compose(op_adjoint(u), op_adjoint(t)));
  if (rev > 1e-10 * scale_) return {false, "(TU)* != U*T*: " + fmt(rev)};
  const ModuleElement x = gen::module_element(d, rng), y = gen::module_element(d, rng);
  const double id = max_abs_diff(inner_product(apply(t, x), y), inner_product(x, apply(op_adjoint(t), y)));
  return require(id <= 1e-10 * std::max(1.0, op_norm(t) * module_norm(x) * module_norm(y)),
                 "<Tx,y> != <x,T*y>: " + fmt(id));
}

// Even draws are positive by construction; odd draws are shifted to be
// indefinite. The lambda_min eigenvector joins the random samples.
Outcome flattening_consistency(const Case& c, Rng& rng) {
  const ModuleDescriptor& d = c.d();
  ModuleOperator t = gen::positive_operator(d, rng);
  if (rng.uniform() < 0.5) {
    const auto eig = spectral::hermitian_eigen(t.flattened());
    const double mid = 0.5 * (eig.values(0) + eig.values(eig.values.size() - 1));
    t = op_subtract(t, ModuleOperator::scalar(d, mid + 1e-3 * std::max(1.0, op_norm(t))));
  }
  std::vector<ModuleElement> xs = samples(d, c.samples, rng);
  xs.push_back(eigen_witness(t, true));
  bool sampled_positive = true;
  for (const auto& x : xs) sampled_positive = sampled_positive && is_positive(inner_product(apply(t, x), x));
  return require(sampled_positive == is_positive_operator(t), "flattened verdict disagrees with sampling");
}

// ---------------------------------------------------------------- measure

Outcome operator_integral_exchange(const Case& c, Rng& rng) {
  const ModuleDescriptor& d = c.d();
  const ModuleOperator t = gen::module_operator(d, rng);
  std::vector<ModuleElement> f;
  double mass = 0.0;
  for (std::size_t i = 0; i < c.frame.size(); ++i) {
    f.push_back(gen::module_element(d, rng));
    mass += c.frame.space().weights()[i] * module_norm(f.back());
  }
  const MeasureSpace& sp = c.frame.space();
  const ModuleElement lhs = apply(t, integrate_module_valued([&](std::size_t i, double) { return f[i]; }, sp));
  const ModuleElement rhs = integrate_module_valued([&](std::size_t i, double) { return apply(t, f[i]); }, sp);
  const double diff = max_abs_diff(lhs, rhs);
  return require(diff <= 1e-12 * std::max(1.0, op_norm(t) * mass), "T int f - int T f = " + fmt(diff));
}

Outcome integral_linearity(const Case& c, Rng& rng) {
  const ModuleDescriptor& d = c.d();
  const MeasureSpace& sp = c.frame.space();
  std::vector<ModuleElement> f, g;
  double mass = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    f.push_back(gen::module_element(d, rng));
    g.push_back(gen::module_element(d, rng));
    mass += sp.weights()[i] * (module_norm(f.back()) + module_norm(g.back()));
  }
  const Complex k = rng.complex_normal();
  const ModuleElement lhs =
      integrate_module_valued([&](std::size_t i, double) { return add(f[i], scale(g[i], k)); }, sp);
  const ModuleElement rhs =
      add(integrate_module_valued([&](std::size_t i, double) { return f[i]; }, sp),
          scale(integrate_module_valued([&](std::size_t i, double) { return g[i]; }, sp), k));
  const double diff = max_abs_diff(lhs, rhs);
  return require(diff <= 1e-13 * std::max(1.0, (1.0 + std::abs(k)) * mass), "linearity defect " + fmt(diff));
}

// ----------------------------------------------------------------- frames

Outcome sc_factorization(const Case& c, Rng&) {
  const double diff = op_max_abs_diff(c.report.op, compose(c.controller.op(), c.s));
  const double scale_ = std::max(1.0, op_norm(c.controller.op()) * op_norm(c.s));
  return require(diff <= 1e-12 * scale_, "|S_C - C S| = " + fmt(diff));
}

Outcome sc_diagnostics(const Case& c, Rng&) {
  const auto& dg = c.report.diagnostics;
  const double limit = 1e-10 * std::max(1.0, op_norm(c.report.op));
  if (dg.hermitian_defect > limit) return {false, "Hermitian defect " + fmt(dg.hermitian_defect)};
  if (!dg.positive) return {false, "S_C not positive"};
  if (!dg.invertible) return {false, "S_C not invertible"};
  return need_frame(c);
}

Outcome sandwich_optimality(const Case& c, Rng&) {
  if (auto o = need_frame(c); !o.ok) return o;
  const ScalarBounds& b = c.report.bounds;
  const double eps = 1e-6 * b.upper;
  if (!sandwich_holds(c.report.op, b)) return {false, "optimal bounds do not sandwich S_C"};
  if (sandwich_holds(c.report.op, {b.lower + eps, b.upper})) return {false, "lower bound not extremal"};
  if (sandwich_holds(c.report.op, {b.lower, b.upper - eps})) return {false, "upper bound not extremal"};
  return {};
}

Outcome contraction(const Case& c, Rng&) {
  if (auto o = need_frame(c); !o.ok) return o;
  const ScalarBounds& b = c.report.bounds;
  const double q = (b.upper - b.lower) / b.upper;
  const double measured = contraction_norm(c.report.op, b);
  return require(measured <= q + 1e-10, "||I - S_C/B|| = " + fmt(measured) + " > " + fmt(q));
}

Outcome norm_form(const Case& c, Rng& rng) {
  if (auto o = need_frame(c); !o.ok) return o;
  const ScalarBounds& b = c.report.bounds;
  const std::vector<ModuleElement> xs = samples(c.d(), c.samples, rng);
  if (!norm_form_check(c.frame, c.controller, b, xs)) return {false, "optimal bounds rejected"};
  if (c.report.tightness == Tightness::General) {
    const std::vector<ModuleElement> w{eigen_witness(c.report.op, true)};
    if (norm_form_check(c.frame, c.controller, {b.upper, b.upper}, w))
      return {false, "bounds (B, B) accepted on the lambda_min eigenvector"};
  }
  return {};
}

Outcome conversion_controlled_to_plain(const Case& c, Rng&) {
  if (auto o = need_frame(c); !o.ok) return o;
  const ScalarBounds b = convert_controlled_to_plain(c.report.bounds, c.controller);
  return require(sandwich_holds(c.s, b), "(" + fmt(b.lower) + ", " + fmt(b.upper) + ") invalid for S");
}

Outcome conversion_plain_to_controlled(const Case& c, Rng&) {
  if (auto o = need_frame(c); !o.ok) return o;
  const ScalarBounds b = convert_plain_to_controlled(c.plain, c.controller, c.variant);
  return require(sandwich_holds(c.report.op, b), "(" + fmt(b.lower) + ", " + fmt(b.upper) +
                                                     ") invalid for S_C, optimal lower " +
                                                     fmt(c.report.bounds.lower) + ", ||C^{-1/2}|| = " +
                                                     fmt(c.controller.inv_sqrt_norm()));
}

Outcome star_conversion(const Case& c, Rng& rng) {
  if (auto o = need_frame(c); !o.ok) return o;
  const ModuleDescriptor& d = c.d();
  const bool multiplication = d.algebra.structure == Structure::Diagonal && d.rank == 1;
  const GlPlusCertificate plain = identity_controller(d);
  const std::vector<ModuleElement> xs = samples(d, c.samples, rng);

  const StarBounds controlled = multiplication ? derive_tight_star_bound(c.frame, c.controller)
                                               : scalar_star(d.algebra, c.report.bounds);
  const StarBounds to_plain = convert_star_bounds(controlled, c.controller, ConversionDirection::ControlledToPlain);
  if (!verify_star_bounds(c.frame, plain, to_plain, xs).holds) return {false, "controlled->plain *-bounds fail"};

  const StarBounds plain_sb = multiplication ? derive_tight_star_bound(c.frame, plain) : scalar_star(d.algebra, c.plain);
  const StarBounds to_controlled = convert_star_bounds(plain_sb, c.controller, ConversionDirection::PlainToControlled);
  return require(verify_star_bounds(c.frame, c.controller, to_controlled, xs).holds,
                 "plain->controlled *-bounds fail");
}

Outcome kf_operator_identity(const Case& c, Rng& rng) {
  if (auto o = need_frame(c); !o.ok) return o;
  const ModuleOperator& k = c.transform;
  const TransformResult tr = transform_frame(k, c.frame, c.controller);
  const ModuleOperator moved = controlled_frame_operator(tr.family, c.controller);
  const ModuleOperator expected = compose(k, compose(c.report.op, op_adjoint(k)));
  const double diff = op_max_abs_diff(moved, expected);
  const double nk = op_norm(k);
  if (diff > 1e-10 * std::max(1.0, nk * nk * op_norm(c.report.op))) return {false, "|S' - K S_C K*| = " + fmt(diff)};
  if (!sandwich_holds(moved, tr.predicted)) return {false, "predicted bounds invalid for K F"};

  const StarTransformResult st =
      transform_star_frame(k, c.frame, c.controller, scalar_star(c.d().algebra, c.report.bounds));
  const std::vector<ModuleElement> xs = samples(c.d(), c.samples, rng);
  return require(verify_star_bounds(st.family, c.controller, st.bounds, xs).holds, "transformed *-bounds fail");
}

// With C = I every controlled quantity must equal its plain counterpart bit for bit.
Outcome identity_reduction(const Case& c, Rng& rng) {
  const ModuleDescriptor& d = c.d();
  const GlPlusCertificate id = identity_controller(d);
  if (op_max_abs_diff(controlled_frame_operator(c.frame, id), c.s) != 0.0) return {false, "S_I != S"};
  const ModuleElement x = gen::module_element(d, rng);
  const CoefficientVector coeffs = analysis(c.frame, x);
  if (max_abs_diff(controlled_synthesis(c.frame, id, coeffs), synthesis(c.frame, coeffs)) != 0.0)
    return {false, "controlled synthesis with C = I differs"};
  if (!c.report.is_frame) return {};
  const ScalarBounds b1 = convert_controlled_to_plain(c.plain, id);
  const ScalarBounds b2 = convert_plain_to_controlled(c.plain, id);
  if (b1.lower != c.plain.lower || b1.upper != c.plain.upper || b2.lower != c.plain.lower ||
      b2.upper != c.plain.upper)
    return {false, "conversions with C = I change the bounds"};
  return {};
}

Outcome reconstruction(const Case& c, Rng& rng) {
  if (auto o = need_frame(c); !o.ok) return o;
  const ModuleElement x = gen::module_element(c.d(), rng);
  const ReconstructResult rr = reconstruct(c.frame, c.controller, x, kReconstructionTol);
  const double err = module_norm(subtract(rr.estimate, x));
  if (err > 10.0 * kReconstructionTol * module_norm(x)) return {false, "error " + fmt(err)};
  const double q = (rr.bounds.upper - rr.bounds.lower) / rr.bounds.upper;
  const auto& res = rr.neumann.residuals;
  for (std::size_t m = 1; m < res.size(); ++m)
    if (res[m - 1] > 0.0 && res[m] > (q + 1e-10) * res[m - 1])
      return {false, "residual ratio " + fmt(res[m] / res[m - 1]) + " at iteration " + std::to_string(m)};
  return {};
}

struct Property {
  const char* name;
  Outcome (*run)(const Case&, Rng&);
};

const std::vector<Property>& properties() {
  static const std::vector<Property> all = {
      {"cstar_identity", cstar_identity},
      {"loewner_order", loewner_order},
      {"psd_sqrt_scaling", psd_sqrt_scaling},
      {"inner_product_axioms", inner_product_axioms},
      {"a_linearity", a_linearity},
      {"operator_form_bound", operator_form_bound},
      {"adjoint_lower_bound", adjoint_lower_bound},
      {"tt_star_bounds", tt_star_bounds},
      {"adjoint_identities", adjoint_identities},
      {"flattening_consistency", flattening_consistency},
      {"operator_integral_exchange", operator_integral_exchange},
      {"integral_linearity", integral_linearity},
      {"sc_factorization", sc_factorization},
      {"sc_diagnostics", sc_diagnostics},
      {"sandwich_optimality", sandwich_optimality},
      {"contraction", contraction},
      {"norm_form", norm_form},
      {"conversion_controlled_to_plain", conversion_controlled_to_plain},
      {"conversion_plain_to_controlled", conversion_plain_to_controlled},
      {"star_conversion", star_conversion},
      {"kf_operator_identity", kf_operator_identity},
      {"identity_reduction", identity_reduction},
      {"reconstruction", reconstruction},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : properties()) out.emplace_back(p.name);
    return out;
  }();
  return names;
}

AnalysisReport run_property_suite(const SuiteOptions& o) {
  if (o.cases < 1) fail(ErrorCode::InvalidArgument, "suite needs cases >= 1");
  if (o.max_dim < 1 || o.max_rank < 1 || o.max_nodes < 1 || o.samples < 1)
    fail(ErrorCode::InvalidArgument, "suite caps and samples must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  const auto& props = properties();
  std::vector<int> passed(props.size(), 0), failed(props.size(), 0);
  Json counterexamples = Json::array();
  int planted = 0;
  for (int index = 0; index < o.cases; ++index) {
    const Case c = make_case(o, index);
    planted += c.planted;
    for (std::size_t p = 0; p < props.size(); ++p) {
      Rng rng = Rng(c.seed).fork(p + 1);
      Outcome out;
      try {
        out = props[p].run(c, rng);
      } catch (const Error& e) {
        out = {false, e.what()};
      }
      if (out.ok) {
        ++passed[p];
        continue;
      }
      ++failed[p];
      counterexamples.push_back({{"property", props[p].name},
                                 {"case", index},
                                 {"suite_seed", o.seed},
                                 {"case_seed", c.seed},
                                 {"detail", out.detail},
                                 {"instance", c.describe()}});
    }
  }

  AnalysisReport r;
  r.kind = "suite";
  r.data["suite"] = {{"seed", o.seed},
                     {"rng", Rng::kName},
                     {"cases", o.cases},
                     {"max_dim", o.max_dim},
                     {"max_rank", o.max_rank},
                     {"max_nodes", o.max_nodes},
                     {"samples", o.samples},
                     {"exponent_variant", o.variant == ExponentVariant::Derived ? "derived" : "as_stated"},
                     {"planted_cases", planted}};
  Json tallies = Json::object();
  int total_failed = 0;
  for (std::size_t p = 0; p < props.size(); ++p) {
    tallies[props[p].name] = {{"passed", passed[p]}, {"failed", failed[p]}};
    r.checks.push_back({props[p].name, failed[p] == 0,
                        std::to_string(passed[p]) + "/" + std::to_string(o.cases) + " cases"});
    r.quantities.emplace_back(std::string(props[p].name) + ".passed", passed[p]);
    r.quantities.emplace_back(std::string(props[p].name) + ".failed", failed[p]);
    total_failed += failed[p];
  }
  r.data["properties"] = std::move(tallies);
  r.data["failures"] = total_failed;
  r.data["counterexamples"] = std::move(counterexamples);
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  r.data["checks"] = std::move(checks);
  r.data["notes"] = Json::array();
  r.data["passed"] = r.passed();
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace cframe

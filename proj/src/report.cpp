#include "cframe/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cframe/error.hpp"
#include "cframe/generators.hpp"

namespace cframe {

namespace {

// Sub-streams of the scenario seed.
enum Stream : std::uint64_t { kNormForm = 1, kStar = 2, kReconstruction = 3, kTransformStar = 4, kStarPlain = 5 };

// Neumann traces longer than this are subsampled in reports.
constexpr std::size_t kTracePoints = 200;

std::uint64_t stream_seed(const Scenario& s, Stream stream) { return Rng(s.seed).fork(stream).next_u64(); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json matrix_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"real", std::move(re)}, {"imag", std::move(im)}};
}

Json diagonal_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < std::min(m.rows(), m.cols()); ++i) {
    re.push_back(m(i, i).real());
    im.push_back(m(i, i).imag());
  }
  return {{"real", std::move(re)}, {"imag", std::move(im)}};
}

Json element_json(const AlgebraElement& a) {
  if (a.descriptor().structure == Structure::Diagonal) return {{"diagonal", diagonal_json(a.entries())}};
  return {{"matrix", matrix_json(a.entries())}};
}

Json bounds_json(const ScalarBounds& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }

Json star_verification_json(const StarVerification& v) {
  return {{"holds", v.holds},           {"samples", v.samples},           {"seed", v.seed},
          {"max_lower_gap", v.max_lower_gap}, {"max_upper_gap", v.max_upper_gap}, {"scale", v.scale}};
}

class Builder {
 public:
  explicit Builder(std::string kind) : start_(std::chrono::steady_clock::now()) { report_.kind = std::move(kind); }

  AnalysisReport& report() { return report_; }

  void check(std::string name, bool passed, std::string detail = {}) {
    report_.checks.push_back({std::move(name), passed, std::move(detail)});
  }
  void quantity(std::string name, double value) { report_.quantities.emplace_back(std::move(name), value); }
  void note(std::string text) { report_.notes.push_back(std::move(text)); }

  AnalysisReport finish() {
    Json checks = Json::array();
    for (const auto& c : report_.checks)
      checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    report_.data["checks"] = std::move(checks);
    report_.data["notes"] = report_.notes;
    report_.data["passed"] = report_.passed();
    report_.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return std::move(report_);
  }

 private:
  AnalysisReport report_;
  std::chrono::steady_clock::time_point start_;
};

std::string relation(double value, const char* op, double limit) {
  return format_double(value) + " " + op + " " + format_double(limit);
}

// Frame verdict and bounds shared by every scenario report.
FrameReport frame_section(Builder& b, const Scenario& s, const Instance& inst, bool tables) {
  const GlPlusCertificate& c = inst.controller;
  b.report().data["controller"] = {{"kind", to_string(s.controller.kind)},
                                   {"eig_min", c.eig_min()},
                                   {"eig_max", c.eig_max()},
                                   {"sqrt_norm", c.sqrt_norm()},
                                   {"inv_sqrt_norm", c.inv_sqrt_norm()}};

  FrameReport fr = is_controlled_frame(inst.frame, c, s.tolerances.positivity, s.tolerances.tightness);
  const auto& dg = fr.diagnostics;
  Json frame = {{"is_frame", fr.is_frame},
                {"tightness", to_string(fr.tightness)},
                {"self_adjoint", dg.self_adjoint},
                {"positive", dg.positive},
                {"invertible", dg.invertible},
                {"hermitian_defect", dg.hermitian_defect}};
  Json eigenvalues = Json::array();
  for (double v : fr.eigenvalues) eigenvalues.push_back(v);
  frame["eigenvalues"] = std::move(eigenvalues);
  if (tables) {
    if (fr.op.descriptor().flat_size() <= 32) frame["frame_operator"] = matrix_json(fr.op.flattened());
    else frame["frame_operator_diagonal"] = diagonal_json(fr.op.flattened());
  }
  b.report().data["frame"] = std::move(frame);

  auto yes = [](bool v) { return v ? "yes" : "no"; };
  b.check("controlled_frame", fr.is_frame,
          std::string("self-adjoint ") + yes(dg.self_adjoint) + ", positive " + yes(dg.positive) + ", invertible " +
              yes(dg.invertible));
  b.report().data["lower_bound"] = fr.bounds.lower;
  b.report().data["upper_bound"] = fr.bounds.upper;
  b.quantity("lower_bound", fr.bounds.lower);
  b.quantity("upper_bound", fr.bounds.upper);
  return fr;
}

void bounds_section(Builder& b, const Scenario& s, const Instance& inst, const FrameReport& fr) {
  const double tol = s.tolerances.positivity;
  const ScalarBounds& bd = fr.bounds;
  const double q = (bd.upper - bd.lower) / bd.upper;
  const double measured = contraction_norm(fr.op, bd);
  b.report().data["contraction_factor"] = q;
  b.report().data["measured_contraction"] = measured;
  b.quantity("contraction_factor", q);
  b.quantity("measured_contraction", measured);
  for (Eigen::Index i = 0; i < fr.eigenvalues.size(); ++i)
    b.quantity("eigenvalue[" + std::to_string(i) + "]", fr.eigenvalues(i));

  const ModuleOperator s_plain = frame_operator(inst.frame);
  const ModuleOperator c_of_s = compose(inst.controller.op(), s_plain);
  const double fact_diff = op_max_abs_diff(fr.op, c_of_s);
  const double fact_scale = std::max(1.0, op_norm(inst.controller.op()) * op_norm(s_plain));
  b.check("sc_factorization", fact_diff <= 1e-12 * fact_scale,
          "max |S_C - C S| = " + format_double(fact_diff) + ", scale " + format_double(fact_scale));

  b.check("sandwich", sandwich_holds(fr.op, bd, tol), "A.I <= S_C <= B.I");
  const double eps = 1e-6 * bd.upper;
  const bool lower_extremal = !sandwich_holds(fr.op, {bd.lower + eps, bd.upper}, tol);
  const bool upper_extremal = !sandwich_holds(fr.op, {bd.lower, bd.upper - eps}, tol);
  b.check("sandwich_optimal", lower_extremal && upper_extremal, "shifting either bound by " + format_double(eps) +
                                                                    " breaks the sandwich");
  b.check("contraction", measured <= q + 1e-10, "||I - S_C/B|| = " + relation(measured, "<=", q + 1e-10));

  const std::uint64_t nf_seed = stream_seed(s, kNormForm);
  b.check("norm_form", norm_form_check(inst.frame, inst.controller, bd, s.samples, nf_seed, tol),
          std::to_string(s.samples) + " samples, seed " + std::to_string(nf_seed));
  if (fr.tightness == Tightness::General) {
    const ModuleElement witness = eigen_witness(fr.op, true);
    const std::vector<ModuleElement> one{witness};
    b.check("norm_form_extremal", !norm_form_check(inst.frame, inst.controller, {bd.upper, bd.upper}, one, tol),
            "bounds (B, B) rejected on the lambda_min eigenvector");
  }

  // scalar conversions
  const GlPlusCertificate& c = inst.controller;
  const ScalarBounds to_plain = convert_controlled_to_plain(bd, c);
  const ScalarBounds plain_opt = optimal_scalar_bounds(s_plain, tol);
  const ScalarBounds derived = convert_plain_to_controlled(plain_opt, c, ExponentVariant::Derived);
  const ScalarBounds stated = convert_plain_to_controlled(plain_opt, c, ExponentVariant::AsStated);
  const bool to_plain_ok = sandwich_holds(s_plain, to_plain, tol);
  const bool derived_ok = sandwich_holds(fr.op, derived, tol);
  const bool stated_ok = sandwich_holds(fr.op, stated, tol);
  b.check("conversion_controlled_to_plain", to_plain_ok, "valid bounds for S");
  b.check("conversion_plain_to_controlled", derived_ok, "valid bounds for S_C");
  Json conv = {{"plain_optimal", bounds_json(plain_opt)},
               {"controlled_to_plain", bounds_json(to_plain)},
               {"plain_to_controlled", bounds_json(derived)},
               {"plain_to_controlled_as_stated", bounds_json(stated)}};
  conv["controlled_to_plain"]["valid"] = to_plain_ok;
  conv["plain_to_controlled"]["valid"] = derived_ok;
  conv["plain_to_controlled_as_stated"]["valid"] = stated_ok;
  b.report().data["conversions"] = std::move(conv);
  b.quantity("plain_to_controlled.lower", derived.lower);
  b.quantity("plain_to_controlled.upper", derived.upper);
  b.quantity("controlled_to_plain.lower", to_plain.lower);
  b.quantity("controlled_to_plain.upper", to_plain.upper);
  if (stated.lower != derived.lower)
    b.note(std::string("lower plain->controlled bound with exponent +2 on ||C^{-1/2}|| is ") +
           format_double(stated.lower) + (stated_ok ? " (valid here)" : " (NOT a valid bound here)"));
}

StarBounds scalar_star_bounds(const AlgebraDescriptor& a, const ScalarBounds& bd) {
  return {AlgebraElement::scalar(a, std::sqrt(bd.lower)), AlgebraElement::scalar(a, std::sqrt(bd.upper))};
}

StarBounds star_section(Builder& b, const Scenario& s, const Instance& inst, const FrameReport& fr) {
  const double tol = s.tolerances.positivity;
  const ModuleDescriptor& d = inst.frame.module();
  const bool multiplication = d.algebra.structure == Structure::Diagonal && d.rank == 1;
  const GlPlusCertificate plain = identity_controller(d);

  const StarBounds sb = multiplication ? derive_tight_star_bound(inst.frame, inst.controller, tol)
                                       : scalar_star_bounds(d.algebra, fr.bounds);
  const StarVerification v = verify_star_bounds(inst.frame, inst.controller, sb, tol, s.samples, stream_seed(s, kStar));
  Json star = {{"kind", multiplication ? "tight" : "scalar"},
               {"lower", element_json(sb.lower)},
               {"upper", element_json(sb.upper)},
               {"verification", star_verification_json(v)}};
  b.check("star_bounds", v.holds, std::to_string(v.samples) + " samples, seed " + std::to_string(v.seed));
  if (multiplication) {
    const double gap = std::max(v.max_lower_gap, v.max_upper_gap);
    const double limit = 1e-10 * std::max(1.0, v.scale);
    b.check("star_tight", gap <= limit, "max Loewner gap " + relation(gap, "<=", limit));
    const Matrix& e = sb.lower.entries();
    for (Eigen::Index i = 0; i < e.rows(); ++i) b.quantity("star_bound[" + std::to_string(i) + "]", e(i, i).real());
  }

  const StarBounds to_plain = convert_star_bounds(sb, inst.controller, ConversionDirection::ControlledToPlain);
  const StarVerification v1 = verify_star_bounds(inst.frame, plain, to_plain, tol, s.samples, stream_seed(s, kStarPlain));
  b.check("star_conversion_controlled_to_plain", v1.holds, "verified against S");

  const StarBounds plain_sb = multiplication ? derive_tight_star_bound(inst.frame, plain, tol)
                                             : scalar_star_bounds(d.algebra, optimal_scalar_bounds(frame_operator(inst.frame), tol));
  const StarBounds to_controlled = convert_star_bounds(plain_sb, inst.controller, ConversionDirection::PlainToControlled);
  const StarVerification v2 = verify_star_bounds(inst.frame, inst.controller, to_controlled, tol, s.samples,
                                                 stream_seed(s, kStar));
  b.check("star_conversion_plain_to_controlled", v2.holds, "verified against S_C");
  star["controlled_to_plain"] = {{"lower", element_json(to_plain.lower)},
                                 {"upper", element_json(to_plain.upper)},
                                 {"verification", star_verification_json(v1)}};
  star["plain_to_controlled"] = {{"lower", element_json(to_controlled.lower)},
                                 {"upper", element_json(to_controlled.upper)},
                                 {"verification", star_verification_json(v2)}};
  b.report().data["star"] = std::move(star);
  return sb;
}

void transform_section(Builder& b, const Scenario& s, const Instance& inst, const FrameReport& fr,
                       const StarBounds& sb) {
  const double tol = s.tolerances.positivity;
  const ModuleOperator& k = *inst.transform;
  Json t = {{"kind", to_string(s.transform->kind)}, {"norm", op_norm(k)}};
  try {
    const TransformResult tr = transform_frame(k, inst.frame, inst.controller, tol);
    const ModuleOperator moved = controlled_frame_operator(tr.family, inst.controller);
    const ModuleOperator expected = compose(k, compose(fr.op, op_adjoint(k)));
    const double diff = op_max_abs_diff(moved, expected);
    const double scale = std::max(1.0, op_norm(k) * op_norm(k) * op_norm(fr.op));
    b.check("transform_operator_identity", diff <= 1e-10 * scale,
            "max |S'_C - K S_C K*| = " + format_double(diff) + ", scale " + format_double(scale));
    b.check("transform_bounds", sandwich_holds(moved, tr.predicted, tol), "predicted bounds valid for K F");
    t["predicted"] = bounds_json(tr.predicted);
    b.quantity("transform.lower", tr.predicted.lower);
    b.quantity("transform.upper", tr.predicted.upper);

    const StarTransformResult st = transform_star_frame(k, inst.frame, inst.controller, sb, tol);
    const StarVerification v = verify_star_bounds(st.family, inst.controller, st.bounds, tol, s.samples,
                                                  stream_seed(s, kTransformStar));
    b.check("transform_star_bounds", v.holds, "transformed *-bounds verified on K F");
    t["star"] = {{"lower", element_json(st.bounds.lower)},
                 {"upper", element_json(st.bounds.upper)},
                 {"verification", star_verification_json(v)}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotSurjective && e.code() != ErrorCode::NonCommuting) throw;
    b.check("transform_preconditions", false, e.what());
  }
  b.report().data["transform"] = std::move(t);
}

void reconstruction_section(Builder& b, const Scenario& s, const Instance& inst, double tol, bool tables) {
  Rng rng(stream_seed(s, kReconstruction));
  const ModuleElement x = gen::module_element(inst.frame.module(), rng);
  const ReconstructResult rr = reconstruct(inst.frame, inst.controller, x, tol, s.max_iter);
  const double err = module_norm(subtract(rr.estimate, x));
  const double norm_x = module_norm(x);
  const double q = (rr.bounds.upper - rr.bounds.lower) / rr.bounds.upper;

  const auto& res = rr.neumann.residuals;
  double worst_ratio = 0.0;
  for (std::size_t m = 1; m < res.size(); ++m)
    if (res[m - 1] > 0.0) worst_ratio = std::max(worst_ratio, res[m] / res[m - 1]);

  b.check("reconstruction", err <= 10.0 * tol * norm_x,
          "||x^ - x|| = " + relation(err, "<=", 10.0 * tol * norm_x));
  b.check("neumann_contraction", worst_ratio <= q + 1e-10,
          "worst residual ratio " + relation(worst_ratio, "<=", q + 1e-10));

  Json r = {{"tol", tol},
            {"iterations", rr.neumann.iterations},
            {"error", err},
            {"relative_error", norm_x > 0.0 ? err / norm_x : 0.0},
            {"contraction_factor", q},
            {"worst_residual_ratio", worst_ratio},
            {"final_residual", res.back()}};
  b.quantity("reconstruction.error", err);
  b.quantity("reconstruction.iterations", rr.neumann.iterations);
  if (tables) {
    const std::size_t stride = std::max<std::size_t>(1, (res.size() + kTracePoints - 1) / kTracePoints);
    Json trace = Json::array();
    for (std::size_t m = 0; m < res.size(); ++m) {
      if (m % stride != 0 && m + 1 != res.size()) continue;
      trace.push_back({m, res[m]});
      b.quantity("residual[" + std::to_string(m) + "]", res[m]);
    }
    r["trace_stride"] = stride;
    r["trace"] = std::move(trace);
  }
  b.report().data["reconstruction"] = std::move(r);
}

// Runs `body`, annotating frames-level errors with the scenario name.
template <class F>
AnalysisReport with_context(const Scenario& s, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    const std::string prefix = "scenario '" + s.name + "'";
    if (std::string(e.what()).find(prefix) != std::string::npos) throw;
    throw Error(e.code(), prefix + ": " + e.what());
  }
}

AnalysisReport analyze(const Scenario& s, bool tables) {
  return with_context(s, [&] {
    Builder b(tables ? "analysis" : "verification");
    b.report().data["scenario"] = scenario_json(s);
    const Instance inst = build_instance(s);
    const FrameReport fr = frame_section(b, s, inst, tables);
    if (fr.is_frame) {
      bounds_section(b, s, inst, fr);
      const StarBounds sb = star_section(b, s, inst, fr);
      if (inst.transform) transform_section(b, s, inst, fr, sb);
      reconstruction_section(b, s, inst, s.tolerances.reconstruction, tables);
    }
    return b.finish();
  });
}

}  // namespace

bool AnalysisReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Format parse_format(const std::string& text) {
  if (text == "human") return Format::Human;
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  fail(ErrorCode::ParseError, "unknown format '" + text + "' (expected human, json or csv)");
}

Json scenario_json(const Scenario& s) {
  Json measure = {{"kind", to_string(s.measure.kind)}, {"nodes", s.measure.nodes}};
  if (s.measure.kind != MeasureKind::DiscreteCounting) measure["interval"] = {s.measure.a, s.measure.b};
  if (!s.measure.weights.empty()) measure["weights"] = s.measure.weights;

  Json frame = {{"source", to_string(s.frame.source)}};
  if (s.frame.source == FrameSource::Builtin) {
    frame["builtin"] = s.frame.builtin;
    frame["alpha"] = s.frame.alpha;
    if (s.frame.builtin == "example2") frame["truncation"] = s.frame.truncation;
  } else if (s.frame.source == FrameSource::Random) {
    frame["scale"] = s.frame.random_scale;
  } else {
    frame["vectors"] = s.frame.vectors.size();
  }

  Json controller = {{"kind", to_string(s.controller.kind)}};
  if (s.controller.kind == ControllerKind::Scalar) controller["alpha"] = s.controller.alpha;
  if (s.controller.kind == ControllerKind::FramePolynomial) controller["coefficients"] = s.controller.coefficients;

  Json out = {{"name", s.name},
              {"algebra", {{"dim", s.algebra.dim}, {"structure", to_string(s.algebra.structure)}}},
              {"rank", s.rank},
              {"measure", std::move(measure)},
              {"frame", std::move(frame)},
              {"controller", std::move(controller)}};
  if (s.transform) out["transform"] = {{"kind", to_string(s.transform->kind)}};
  out["tolerances"] = {{"positivity", s.tolerances.positivity},
                       {"tightness", s.tolerances.tightness},
                       {"reconstruction", s.tolerances.reconstruction}};
  out["seed"] = s.seed;
  out["rng"] = Rng::kName;
  out["samples"] = s.samples;
  out["max_iter"] = s.max_iter;
  return out;
}

AnalysisReport run_analysis(const Scenario& s) { return analyze(s, true); }

AnalysisReport run_verification(const Scenario& s) { return analyze(s, false); }

AnalysisReport run_reconstruction(const Scenario& s, std::optional<double> tol) {
  const double t = tol.value_or(s.tolerances.reconstruction);
  if (!(t > 0.0)) fail(ErrorCode::InvalidArgument, "reconstruction tolerance must be > 0");
  return with_context(s, [&] {
    Builder b("reconstruction");
    b.report().data["scenario"] = scenario_json(s);
    const Instance inst = build_instance(s);
    const FrameReport fr = frame_section(b, s, inst, false);
    if (fr.is_frame) reconstruction_section(b, s, inst, t, true);
    return b.finish();
  });
}

AnalysisReport dump_frame(const Scenario& s) {
  return with_context(s, [&] {
    Builder b("frame");
    b.report().data["scenario"] = scenario_json(s);
    const Instance inst = build_instance(s);
    const FrameFamily& f = inst.frame;
    const bool diagonal = f.module().algebra.structure == Structure::Diagonal;
    Json vectors = Json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string tag = "F[" + std::to_string(i) + "]";
      const double node = f.space().nodes()[i], weight = f.space().weights()[i];
      b.quantity(tag + ".node", node);
      b.quantity(tag + ".weight", weight);
      Json components = Json::array();
      for (int j = 0; j < f.module().rank; ++j) {
        const Matrix e = f.vectors()[i].component(j).entries();
        components.push_back(diagonal ? diagonal_json(e) : matrix_json(e));
        const std::string ctag = tag + ".x" + std::to_string(j);
        for (Eigen::Index r = 0; r < e.rows(); ++r) {
          for (Eigen::Index c = 0; c < e.cols(); ++c) {
            if (diagonal && r != c) continue;
            const std::string etag = diagonal ? ctag + "[" + std::to_string(r) + "]"
                                              : ctag + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
            b.quantity(etag + ".re", e(r, c).real());
            b.quantity(etag + ".im", e(r, c).imag());
          }
        }
      }
      vectors.push_back({{"index", i}, {"node", node}, {"weight", weight}, {"components", std::move(components)}});
    }
    b.report().data["storage"] = diagonal ? "diagonal" : "matrix";
    b.report().data["vectors"] = std::move(vectors);
    return b.finish();
  });
}

std::string emit(const AnalysisReport& report, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::Json: {
      Json doc = {{"kind", report.kind}};
      for (const auto& [key, value] : report.data.items()) doc[key] = value;
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::Csv:
      out << "quantity,value\n";
      for (const auto& [name, value] : report.quantities) out << name << ',' << format_double(value) << '\n';
      break;
    case Format::Human: {
      std::string title = report.kind;
      if (report.data.contains("scenario")) title += ": " + report.data["scenario"]["name"].get<std::string>();
      out << title << '\n';
      std::size_t width = 0;
      for (const auto& q : report.quantities) width = std::max(width, q.first.size());
      for (const auto& c : report.checks) width = std::max(width, c.name.size());
      if (!report.quantities.empty()) out << "\nquantities\n";
      for (const auto& [name, value] : report.quantities) {
        out << "  " << name << std::string(width - name.size() + 2, ' ') << format_double(value) << '\n';
      }
      if (!report.checks.empty()) out << "\nchecks\n";
      std::size_t passed = 0;
      for (const auto& c : report.checks) {
        passed += c.passed;
        out << "  " << (c.passed ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ')
            << c.detail << '\n';
      }
      if (!report.notes.empty()) out << "\nnotes\n";
      for (const auto& n : report.notes) out << "  " << n << '\n';
      char wall[64];
      std::snprintf(wall, sizeof wall, "%.1f ms", report.wall_ms);
      out << "\nresult: " << (report.passed() ? "PASS" : "FAIL") << " (" << passed << "/" << report.checks.size()
          << " checks), wall time " << wall << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace cframe

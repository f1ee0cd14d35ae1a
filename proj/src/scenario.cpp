#include "cframe/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cframe/config.hpp"
#include "cframe/error.hpp"
#include "cframe/generators.hpp"

namespace cframe {

namespace {

constexpr std::uint64_t kFallbackSeed = 20240607;

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::ValidationError, what); }

MeasureKind parse_measure_kind(const config::Document& doc, const std::string& text) {
  if (text == "gauss_legendre") return MeasureKind::IntervalGaussLegendre;
  if (text == "trapezoid") return MeasureKind::IntervalTrapezoid;
  if (text == "riemann") return MeasureKind::IntervalRiemann;
  if (text == "counting") return MeasureKind::DiscreteCounting;
  fail(ErrorCode::ParseError, doc.where("measure", "kind") + ": unknown measure kind '" + text + "'");
}

// Complex matrix from a real table plus an optional imaginary table.
Matrix read_matrix(const config::Document& doc, const std::string& section, const std::string& key) {
  const auto re = doc.table(section, key);
  const auto im = doc.table(section, key + "_imag");
  if (re.empty()) fail(ErrorCode::ParseError, doc.where(section, key) + " is required and must be non-empty");
  const std::size_t cols = re.front().size();
  Matrix m(static_cast<Eigen::Index>(re.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < re.size(); ++r) {
    if (re[r].size() != cols) fail(ErrorCode::ParseError, doc.where(section, key) + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = re[r][c];
  }
  if (!im.empty()) {
    if (im.size() != re.size()) fail(ErrorCode::ParseError, doc.where(section, key + "_imag") + " shape differs");
    for (std::size_t r = 0; r < im.size(); ++r) {
      if (im[r].size() != cols) fail(ErrorCode::ParseError, doc.where(section, key + "_imag") + " shape differs");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) += Complex(0.0, im[r][c]);
    }
  }
  return m;
}

std::vector<Complex> read_complex_list(const config::Document& doc, const std::string& section,
                                       const std::string& key) {
  const auto re = doc.numbers(section, key);
  const auto im = doc.numbers(section, key + "_imag");
  if (!im.empty() && im.size() != re.size())
    fail(ErrorCode::ParseError, doc.where(section, key + "_imag") + " length differs");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < re.size(); ++i) out.emplace_back(re[i], im.empty() ? 0.0 : im[i]);
  return out;
}

void apply_builtin_shape(Scenario& s) {
  if (s.frame.builtin == "example1") {
    s.algebra = {2, Structure::Diagonal};
    s.rank = 1;
  } else if (s.frame.builtin == "example2") {
    s.algebra = {s.frame.truncation, Structure::Diagonal};
    s.rank = 1;
    s.measure = {MeasureKind::DiscreteCounting, 0.0, static_cast<double>(s.frame.truncation), s.frame.truncation, {}};
  }
}

void validate_builtin(const Scenario& s) {
  if (s.frame.builtin != "example1" && s.frame.builtin != "example2")
    invalid("unknown builtin frame '" + s.frame.builtin + "' (expected example1 or example2)");
  if (!(s.frame.alpha > 0.0) || !std::isfinite(s.frame.alpha))
    invalid(s.frame.builtin + " requires alpha > 0, got " + std::to_string(s.frame.alpha));
  if (s.frame.builtin == "example2" && s.frame.truncation < 1)
    invalid("example2 requires truncation >= 1, got " + std::to_string(s.frame.truncation));
}

}  // namespace

const char* to_string(FrameSource s) noexcept {
  switch (s) {
    case FrameSource::Builtin: return "builtin";
    case FrameSource::Explicit: return "explicit";
    case FrameSource::Random: return "random";
  }
  return "unknown";
}

const char* to_string(ControllerKind k) noexcept {
  switch (k) {
    case ControllerKind::Identity: return "identity";
    case ControllerKind::Scalar: return "scalar";
    case ControllerKind::Explicit: return "explicit";
    case ControllerKind::FramePolynomial: return "frame_polynomial";
  }
  return "unknown";
}

const char* to_string(TransformKind k) noexcept {
  switch (k) {
    case TransformKind::Scalar: return "scalar";
    case TransformKind::Explicit: return "explicit";
    case TransformKind::ControllerPolynomial: return "controller_polynomial";
  }
  return "unknown";
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CFRAME_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    invalid(std::string("CFRAME_SEED is not an unsigned integer: '") + env + "'");
  }
  return kFallbackSeed;
}

Scenario builtin_scenario(const std::string& name, double alpha, int truncation) {
  Scenario s;
  s.name = name;
  s.seed = default_seed();
  s.frame.source = FrameSource::Builtin;
  s.frame.builtin = name;
  s.frame.alpha = alpha;
  s.frame.truncation = truncation;
  validate_builtin(s);
  apply_builtin_shape(s);
  s.controller = {ControllerKind::Scalar, alpha, {}, {}};
  return s;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  const config::Document doc = config::parse(text, source);
  for (const auto& section : doc.sections()) {
    static const std::vector<std::string> known = {"",          "algebra",   "module",    "measure",
                                                   "frame",     "controller", "transform", "tolerances"};
    bool ok = false;
    for (const auto& k : known) ok = ok || k == section;
    if (!ok) fail(ErrorCode::ParseError, source + ": unknown section [" + section + "]");
  }
  doc.require_known("", {"name", "seed", "samples", "max_iter"});
  doc.require_known("algebra", {"dim", "structure"});
  doc.require_known("module", {"rank"});
  doc.require_known("measure", {"kind", "interval", "nodes", "weights"});
  doc.require_known("frame", {"builtin", "source", "alpha", "truncation", "vectors", "vectors_imag", "scale"});
  doc.require_known("controller", {"type", "alpha", "matrix", "matrix_imag", "coefficients"});
  doc.require_known("transform", {"type", "value", "value_imag", "matrix", "matrix_imag", "coefficients",
                                  "coefficients_imag"});
  doc.require_known("tolerances", {"positivity", "tightness", "reconstruction"});

  Scenario s;
  s.name = doc.string("", "name", "scenario");
  if (const auto* e = doc.find("", "seed")) {
    const double v = doc.number("", "seed", 0.0);
    if (v < 0 || v != std::floor(v) || v > 9.007199254740992e15)
      fail(ErrorCode::ParseError, doc.where("", "seed") + " must be a non-negative integer");
    s.seed = static_cast<std::uint64_t>(v);
    (void)e;
  } else {
    s.seed = default_seed();
  }
  s.samples = doc.integer("", "samples", s.samples);
  s.max_iter = doc.integer("", "max_iter", s.max_iter);
  if (s.samples < 1) invalid(doc.where("", "samples") + " must be >= 1");
  if (s.max_iter < 1) invalid(doc.where("", "max_iter") + " must be >= 1");

  // frame first: builtins fix the algebra, module and measure defaults
  const std::string builtin = doc.string("frame", "builtin", "");
  const std::string source_kind = doc.string("frame", "source", builtin.empty() ? "" : "builtin");
  if (source_kind == "builtin") {
    s.frame.source = FrameSource::Builtin;
    s.frame.builtin = builtin;
    s.frame.alpha = doc.number("frame", "alpha", 1.0);
    s.frame.truncation = doc.integer("frame", "truncation", 100);
    validate_builtin(s);
    apply_builtin_shape(s);
    s.controller = {ControllerKind::Scalar, s.frame.alpha, {}, {}};
  } else if (source_kind == "explicit") {
    s.frame.source = FrameSource::Explicit;
  } else if (source_kind == "random") {
    s.frame.source = FrameSource::Random;
    s.frame.random_scale = doc.number("frame", "scale", 1.0);
    if (!(s.frame.random_scale > 0.0)) invalid(doc.where("frame", "scale") + " must be > 0");
  } else if (source_kind.empty()) {
    fail(ErrorCode::ParseError, source + ": [frame] needs 'builtin' or 'source'");
  } else {
    fail(ErrorCode::ParseError, doc.where("frame", "source") + ": unknown frame source '" + source_kind + "'");
  }

  const bool is_builtin = s.frame.source == FrameSource::Builtin;
  if (doc.has_section("algebra")) {
    AlgebraDescriptor a{doc.integer("algebra", "dim", s.algebra.dim), s.algebra.structure};
    const std::string st = doc.string("algebra", "structure", to_string(s.algebra.structure));
    if (st == "full") a.structure = Structure::Full;
    else if (st == "diagonal") a.structure = Structure::Diagonal;
    else fail(ErrorCode::ParseError, doc.where("algebra", "structure") + ": expected \"full\" or \"diagonal\"");
    if (a.dim < 1) invalid(doc.where("algebra", "dim") + " must be >= 1");
    if (is_builtin && !(a == s.algebra))
      invalid(doc.where("algebra", "dim") + ": " + s.frame.builtin + " is defined over " + describe(s.algebra));
    s.algebra = a;
  }
  if (doc.has_section("module")) {
    const int rank = doc.integer("module", "rank", s.rank);
    if (rank < 1) invalid(doc.where("module", "rank") + " must be >= 1");
    if (is_builtin && rank != s.rank) invalid(doc.where("module", "rank") + ": builtin frames have rank 1");
    s.rank = rank;
  }
  if (doc.has_section("measure")) {
    MeasureSpec m = s.measure;
    if (doc.find("measure", "kind")) m.kind = parse_measure_kind(doc, doc.string("measure", "kind", ""));
    if (doc.find("measure", "interval")) {
      const auto iv = doc.numbers("measure", "interval");
      if (iv.size() != 2) fail(ErrorCode::ParseError, doc.where("measure", "interval") + " must be [a, b]");
      m.a = iv[0];
      m.b = iv[1];
    }
    m.nodes = doc.integer("measure", "nodes", m.nodes);
    m.weights = doc.numbers("measure", "weights");
    if (m.nodes < 1) invalid(doc.where("measure", "nodes") + " must be >= 1");
    if (m.kind != MeasureKind::DiscreteCounting && !(m.a < m.b))
      invalid(doc.where("measure", "interval") + " needs a < b");
    if (!m.weights.empty()) {
      if (m.kind != MeasureKind::DiscreteCounting)
        invalid(doc.where("measure", "weights") + " is only valid for the counting measure");
      if (doc.find("measure", "nodes") && m.nodes != static_cast<int>(m.weights.size()))
        invalid(doc.where("measure", "weights") + " length differs from nodes");
      m.nodes = static_cast<int>(m.weights.size());
    }
    if (is_builtin) {
      if (s.frame.builtin == "example1" &&
          (m.kind == MeasureKind::DiscreteCounting || m.a != 0.0 || m.b != 1.0))
        invalid(doc.where("measure", "kind") + ": example1 lives on the interval [0, 1]");
      if (s.frame.builtin == "example2" &&
          (m.kind != MeasureKind::DiscreteCounting || m.nodes != s.frame.truncation || !m.weights.empty()))
        invalid(doc.where("measure", "kind") + ": example2 uses unit counting measure over the truncation");
    }
    s.measure = m;
  }

  if (s.frame.source == FrameSource::Explicit) {
    const auto re = doc.table("frame", "vectors");
    const auto im = doc.table("frame", "vectors_imag");
    if (re.empty()) fail(ErrorCode::ParseError, doc.where("frame", "vectors") + " is required for explicit frames");
    if (!im.empty() && im.size() != re.size())
      fail(ErrorCode::ParseError, doc.where("frame", "vectors_imag") + " length differs");
    const int n = s.algebra.dim, cols = s.algebra.dim * s.rank;
    for (std::size_t v = 0; v < re.size(); ++v) {
      if (static_cast<int>(re[v].size()) != n * cols || (!im.empty() && im[v].size() != re[v].size()))
        fail(ErrorCode::ParseError, doc.where("frame", "vectors") + ": vector " + std::to_string(v) + " needs " +
                                        std::to_string(n * cols) + " entries (row-major n x n*rank)");
      Matrix m(n, cols);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < cols; ++c)
          m(r, c) = Complex(re[v][r * cols + c], im.empty() ? 0.0 : im[v][r * cols + c]);
      s.frame.vectors.push_back(std::move(m));
    }
    if (s.measure.kind == MeasureKind::DiscreteCounting && !doc.find("measure", "nodes") && s.measure.weights.empty())
      s.measure.nodes = static_cast<int>(s.frame.vectors.size());
  }

  if (doc.has_section("controller")) {
    const std::string type = doc.string("controller", "type", "identity");
    ControllerSpec c;
    if (type == "identity") {
      c.kind = ControllerKind::Identity;
    } else if (type == "scalar") {
      c.kind = ControllerKind::Scalar;
      c.alpha = doc.number("controller", "alpha", 1.0);
      if (!(c.alpha > 0.0)) invalid(doc.where("controller", "alpha") + " must be > 0");
    } else if (type == "explicit") {
      c.kind = ControllerKind::Explicit;
      c.matrix = read_matrix(doc, "controller", "matrix");
    } else if (type == "frame_polynomial") {
      c.kind = ControllerKind::FramePolynomial;
      c.coefficients = doc.numbers("controller", "coefficients");
      if (c.coefficients.empty()) fail(ErrorCode::ParseError, doc.where("controller", "coefficients") + " is required");
    } else {
      fail(ErrorCode::ParseError, doc.where("controller", "type") + ": unknown controller type '" + type + "'");
    }
    s.controller = std::move(c);
  }

  if (doc.has_section("transform")) {
    const std::string type = doc.string("transform", "type", "scalar");
    TransformSpec t;
    if (type == "scalar") {
      t.kind = TransformKind::Scalar;
      t.scalar = {doc.number("transform", "value", 1.0), doc.number("transform", "value_imag", 0.0)};
    } else if (type == "explicit") {
      t.kind = TransformKind::Explicit;
      t.matrix = read_matrix(doc, "transform", "matrix");
    } else if (type == "controller_polynomial") {
      t.kind = TransformKind::ControllerPolynomial;
      t.coefficients = read_complex_list(doc, "transform", "coefficients");
      if (t.coefficients.empty()) fail(ErrorCode::ParseError, doc.where("transform", "coefficients") + " is required");
    } else {
      fail(ErrorCode::ParseError, doc.where("transform", "type") + ": unknown transform type '" + type + "'");
    }
    s.transform = std::move(t);
  }

  s.tolerances.positivity = doc.number("tolerances", "positivity", s.tolerances.positivity);
  s.tolerances.tightness = doc.number("tolerances", "tightness", s.tolerances.tightness);
  s.tolerances.reconstruction = doc.number("tolerances", "reconstruction", s.tolerances.reconstruction);
  if (!(s.tolerances.positivity > 0.0) || !(s.tolerances.tightness > 0.0) || !(s.tolerances.reconstruction > 0.0))
    invalid(source + ": tolerances must be > 0");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) fail(ErrorCode::IoError, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << probe.rdbuf();
  return parse_scenario(buf.str(), path);
}

ModuleDescriptor module_descriptor(const Scenario& s) { return {s.algebra, s.rank}; }

MeasureSpace build_measure(const Scenario& s) {
  const MeasureSpec& m = s.measure;
  switch (m.kind) {
    case MeasureKind::IntervalGaussLegendre: return gauss_legendre(m.a, m.b, m.nodes);
    case MeasureKind::IntervalTrapezoid:
      if (m.nodes < 2) invalid("trapezoid measure needs nodes >= 2");
      return trapezoid(m.a, m.b, m.nodes);
    case MeasureKind::IntervalRiemann: return riemann(m.a, m.b, m.nodes);
    case MeasureKind::DiscreteCounting:
      if (m.weights.empty()) return counting(m.nodes);
      for (double w : m.weights)
        if (!(w > 0.0)) invalid("counting weights must be > 0");
      return counting(m.weights);
  }
  invalid("unknown measure kind");
}

namespace {

FrameFamily build_frame(const Scenario& s) {
  const ModuleDescriptor d = module_descriptor(s);
  MeasureSpace space = build_measure(s);
  const FrameSpec& f = s.frame;
  switch (f.source) {
    case FrameSource::Builtin:
      if (f.builtin == "example1") {
        // F_w = diag(w, w/2)
        return FrameFamily::sample(d, std::move(space), [&](std::size_t, double w) {
          return ModuleElement::from_components(d, {AlgebraElement::diagonal(d.algebra, {w, w / 2.0})});
        });
      }
      // example2: F at index n is e_n / (n + 1)
      return FrameFamily::sample(d, std::move(space), [&](std::size_t i, double) {
        Matrix m = Matrix::Zero(d.dim(), d.dim());
        m(i, i) = 1.0 / (static_cast<double>(i) + 1.0);
        return ModuleElement(d, std::move(m));
      });
    case FrameSource::Explicit: {
      if (f.vectors.size() != space.size())
        invalid("explicit frame has " + std::to_string(f.vectors.size()) + " vectors but the measure has " +
                std::to_string(space.size()) + " nodes");
      std::vector<ModuleElement> vectors;
      for (const auto& m : f.vectors) vectors.emplace_back(d, m);
      return {d, std::move(space), std::move(vectors)};
    }
    case FrameSource::Random: {
      Rng rng = Rng(s.seed).fork(0);
      return FrameFamily::sample(d, std::move(space), [&](std::size_t, double) {
        return scale(gen::module_element(d, rng), f.random_scale);
      });
    }
  }
  invalid("unknown frame source");
}

ModuleOperator polynomial(const ModuleOperator& base, const std::vector<Complex>& coeffs) {
  const ModuleDescriptor& d = base.descriptor();
  ModuleOperator acc = ModuleOperator::zero(d);
  ModuleOperator power = ModuleOperator::identity(d);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    acc = op_add(acc, op_scale(power, coeffs[j]));
    if (j + 1 < coeffs.size()) power = compose(base, power);
  }
  return acc;
}

}  // namespace

Instance build_instance(const Scenario& s) {
  try {
    FrameFamily frame = build_frame(s);
    const ModuleDescriptor d = frame.module();
    const double tol = s.tolerances.positivity;

    std::optional<GlPlusCertificate> controller;
    switch (s.controller.kind) {
      case ControllerKind::Identity: controller = identity_controller(d); break;
      case ControllerKind::Scalar:
        if (!(s.controller.alpha > 0.0)) invalid("scalar controller requires alpha > 0");
        controller = certify_gl_plus(ModuleOperator::scalar(d, s.controller.alpha), tol);
        break;
      case ControllerKind::Explicit:
        controller = certify_gl_plus(ModuleOperator(d, s.controller.matrix), tol);
        break;
      case ControllerKind::FramePolynomial: {
        std::vector<Complex> coeffs(s.controller.coefficients.begin(), s.controller.coefficients.end());
        const ModuleOperator p = polynomial(frame_operator(frame), coeffs);
        const Matrix sym = 0.5 * (p.flattened() + p.flattened().adjoint());
        controller = certify_gl_plus(ModuleOperator::projected(d, sym), tol);
        break;
      }
    }

    std::optional<ModuleOperator> transform;
    if (s.transform) {
      const TransformSpec& t = *s.transform;
      switch (t.kind) {
        case TransformKind::Scalar: transform = ModuleOperator::scalar(d, t.scalar); break;
        case TransformKind::Explicit: transform = ModuleOperator(d, t.matrix); break;
        case TransformKind::ControllerPolynomial: transform = polynomial(controller->op(), t.coefficients); break;
      }
    }
    return {std::move(frame), std::move(*controller), std::move(transform)};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    const ErrorCode code = e.code() == ErrorCode::InvalidArgument ? ErrorCode::ValidationError : e.code();
    throw Error(code, "scenario '" + s.name + "': " + e.what());
  }
}

}  // namespace cframe

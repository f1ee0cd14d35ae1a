#include "cframe/frames.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cframe/error.hpp"
#include "cframe/generators.hpp"

namespace cframe {

namespace {

std::vector<ModuleElement> controlled_vectors(const FrameFamily& f, const GlPlusCertificate& c) {
  require_same(f.module(), c.descriptor(), "controller");
  std::vector<ModuleElement> out;
  out.reserve(f.size());
  for (const auto& v : f.vectors()) out.push_back(apply(c.op(), v));
  return out;
}

// x -> integral of <x, F_w> G_w acts as X (sum_i mu_i F_i^* G_i), so row c
// of the flattened operator, the image of basis element c, accumulates node
// by node. Under a diagonal algebra only the diagonals of the k x k blocks
// can be nonzero and are accumulated directly.
ModuleOperator assemble(const FrameFamily& f, const std::vector<ModuleElement>& g) {
  const ModuleDescriptor& d = f.module();
  const int n = d.dim(), k = d.rank, size = d.flat_size();
  const bool diagonal = d.algebra.structure == Structure::Diagonal;
  Matrix m = Matrix::Zero(size, size);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = f.space().weights()[i];
    const Matrix& fi = f.vectors()[i].block_row();
    const Matrix& gi = g[i].block_row();
    if (!diagonal) {
      m.noalias() += w * (fi.adjoint() * gi);
      continue;
    }
    for (int p = 0; p < n; ++p)
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) m(a * n + p, b * n + p) += w * (std::conj(fi(p, a * n + p)) * gi(p, b * n + p));
  }
  return ModuleOperator::projected(d, std::move(m));
}

// <S_C x, x> evaluated as the integral of <x, F_w> <C F_w, x>.
AlgebraElement middle_term(const FrameFamily& f, const std::vector<ModuleElement>& cf, const ModuleElement& x) {
  const ModuleDescriptor& d = f.module();
  if (d.algebra.structure != Structure::Diagonal) {
    return integrate_algebra_valued(
        [&](std::size_t i, double) { return mul(inner_product(x, f.vectors()[i]), inner_product(cf[i], x)); },
        f.space());
  }
  const int n = d.dim(), k = d.rank;
  const Matrix& xr = x.block_row();
  std::vector<Complex> acc(n, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = f.space().weights()[i];
    const Matrix& fi = f.vectors()[i].block_row();
    const Matrix& gi = cf[i].block_row();
    for (int p = 0; p < n; ++p) {
      Complex left = 0.0, right = 0.0;
      for (int j = 0; j < k; ++j) {
        left += xr(p, j * n + p) * std::conj(fi(p, j * n + p));
        right += gi(p, j * n + p) * std::conj(xr(p, j * n + p));
      }
      acc[p] += w * (left * right);
    }
  }
  return AlgebraElement::diagonal(d.algebra, acc);
}

ModuleElement weighted_sum(const FrameFamily& f, const std::vector<AlgebraElement>& coeffs,
                           const std::vector<ModuleElement>& vectors) {
  return integrate_module_valued(
      [&](std::size_t i, double) { return act(coeffs[i], vectors[i]); }, f.space());
}

std::vector<ModuleElement> draw_samples(const ModuleDescriptor& d, int samples, std::uint64_t seed) {
  if (samples < 1) fail(ErrorCode::InvalidArgument, "need at least one sample");
  Rng rng(seed);
  std::vector<ModuleElement> xs;
  xs.reserve(samples);
  for (int s = 0; s < samples; ++s) xs.push_back(gen::module_element(d, rng));
  return xs;
}

bool is_nonzero(const AlgebraElement& a) { return operator_norm(a) > 0.0; }

}  // namespace

// ------------------------------------------------------------------ types

FrameFamily::FrameFamily(ModuleDescriptor module, MeasureSpace space, std::vector<ModuleElement> vectors)
    : module_(module), space_(std::move(space)), vectors_(std::move(vectors)) {
  if (vectors_.size() != space_.size())
    fail(ErrorCode::InvalidArgument, "frame needs one vector per node (" + std::to_string(space_.size()) +
                                         "), got " + std::to_string(vectors_.size()));
  for (const auto& v : vectors_) require_same(v.descriptor(), module_, "frame vector");
}

FrameFamily FrameFamily::sample(ModuleDescriptor module, MeasureSpace space,
                                const Integrand<ModuleElement>& generator) {
  std::vector<ModuleElement> vectors;
  vectors.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) vectors.push_back(generator(i, space.nodes()[i]));
  return {module, std::move(space), std::move(vectors)};
}

CoefficientVector::CoefficientVector(MeasureSpace space, std::vector<AlgebraElement> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.size()) fail(ErrorCode::InvalidArgument, "coefficient count differs from node count");
  for (const auto& c : coeffs_) require_same(c.descriptor(), coeffs_.front().descriptor(), "coefficient");
}

AlgebraElement l2_inner_product(const CoefficientVector& c, const CoefficientVector& d) {
  if (!(c.space() == d.space())) fail(ErrorCode::DescriptorMismatch, "coefficient vectors live on different spaces");
  return integrate_algebra_valued(
      [&](std::size_t i, double) { return mul(c.coeffs()[i], adjoint(d.coeffs()[i])); }, c.space());
}

bool ScalarBounds::valid() const noexcept {
  return std::isfinite(lower) && std::isfinite(upper) && lower > 0.0 && lower <= upper;
}

const char* to_string(Tightness t) noexcept {
  switch (t) {
    case Tightness::Tight: return "tight";
    case Tightness::Parseval: return "parseval";
    case Tightness::General: return "general";
  }
  return "unknown";
}

// -------------------------------------------------------------- operators

CoefficientVector analysis(const FrameFamily& f, const ModuleElement& x) {
  require_same(x.descriptor(), f.module(), "analysis");
  std::vector<AlgebraElement> coeffs;
  coeffs.reserve(f.size());
  for (const auto& v : f.vectors()) coeffs.push_back(inner_product(x, v));
  return {f.space(), std::move(coeffs)};
}

ModuleElement synthesis(const FrameFamily& f, const CoefficientVector& c) {
  if (!(c.space() == f.space())) fail(ErrorCode::DescriptorMismatch, "coefficients live on a different space");
  return weighted_sum(f, c.coeffs(), f.vectors());
}

ModuleElement controlled_synthesis(const FrameFamily& f, const GlPlusCertificate& c,
                                   const CoefficientVector& coeffs) {
  if (!(coeffs.space() == f.space())) fail(ErrorCode::DescriptorMismatch, "coefficients live on a different space");
  return weighted_sum(f, coeffs.coeffs(), controlled_vectors(f, c));
}

ModuleOperator frame_operator(const FrameFamily& f) { return assemble(f, f.vectors()); }

ModuleOperator controlled_frame_operator(const FrameFamily& f, const GlPlusCertificate& c) {
  return assemble(f, controlled_vectors(f, c));
}

GlPlusCertificate identity_controller(const ModuleDescriptor& d) {
  return certify_gl_plus(ModuleOperator::identity(d));
}

ScalarBounds optimal_scalar_bounds(const ModuleOperator& s, double tol) {
  if (!is_self_adjoint(s, tol)) fail(ErrorCode::NotSelfAdjoint, "frame operator is not self-adjoint");
  const auto eig = spectral::hermitian_eigen(s.flattened());
  const ScalarBounds b{eig.values(0), eig.values(eig.values.size() - 1)};
  if (!(b.lower > spectral::slack(s.flattened(), tol)))
    fail(ErrorCode::NotPositive, "frame operator is not positive definite (lambda_min = " +
                                     std::to_string(b.lower) + ")");
  return b;
}

bool sandwich_holds(const ModuleOperator& s, const ScalarBounds& bounds, double tol) {
  const ModuleDescriptor& d = s.descriptor();
  return is_positive_operator(op_subtract(s, ModuleOperator::scalar(d, bounds.lower)), tol) &&
         is_positive_operator(op_subtract(ModuleOperator::scalar(d, bounds.upper), s), tol);
}

FrameReport is_controlled_frame(const FrameFamily& f, const GlPlusCertificate& c, double tol,
                                double tightness_tol) {
  ModuleOperator s_c = controlled_frame_operator(f, c);
  const Matrix& m = s_c.flattened();
  FrameDiagnostics diag;
  diag.hermitian_defect = spectral::largest_singular_value(m - m.adjoint());
  diag.self_adjoint = is_self_adjoint(s_c, tol);
  diag.positive = is_positive_operator(s_c, tol);
  diag.invertible = is_surjective(s_c, tol);

  const auto eig = spectral::hermitian_eigen(m);
  FrameReport report{false, {eig.values(0), eig.values(eig.values.size() - 1)}, std::move(s_c),
                     Tightness::General, diag, eig.values};
  report.is_frame = diag.self_adjoint && diag.positive && diag.invertible && report.bounds.valid();
  if (report.is_frame) {
    const auto& b = report.bounds;
    if (std::abs(b.upper - b.lower) <= tightness_tol * b.upper) {
      report.tightness = std::abs(b.lower - 1.0) <= tightness_tol && std::abs(b.upper - 1.0) <= tightness_tol
                             ? Tightness::Parseval
                             : Tightness::Tight;
    }
  }
  return report;
}

bool norm_form_check(const FrameFamily& f, const GlPlusCertificate& c, const ScalarBounds& bounds,
                     std::span<const ModuleElement> samples, double tol) {
  const std::vector<ModuleElement> cf = controlled_vectors(f, c);
  for (const auto& x : samples) {
    const AlgebraElement middle = middle_term(f, cf, x);
    const double mid = operator_norm(middle);
    const double xx = operator_norm(inner_product(x, x));
    const double slack = tol * std::max(1.0, bounds.upper * xx);
    if (bounds.lower * xx > mid + slack || mid > bounds.upper * xx + slack) return false;
  }
  return true;
}

bool norm_form_check(const FrameFamily& f, const GlPlusCertificate& c, const ScalarBounds& bounds,
                     int samples, std::uint64_t seed, double tol) {
  const auto xs = draw_samples(f.module(), samples, seed);
  return norm_form_check(f, c, bounds, xs, tol);
}

ModuleElement eigen_witness(const ModuleOperator& s, bool smallest) {
  const auto eig = spectral::hermitian_eigen(s.flattened());
  const Eigen::Index col = smallest ? 0 : eig.values.size() - 1;
  return ModuleElement::from_flat_vector(s.descriptor(), eig.vectors.col(col));
}

// ------------------------------------------------------------ conversions

ScalarBounds convert_controlled_to_plain(const ScalarBounds& bounds, const GlPlusCertificate& c) {
  const double root = c.sqrt_norm(), inv_root = c.inv_sqrt_norm();
  return {bounds.lower / (root * root), bounds.upper * inv_root * inv_root};
}

ScalarBounds convert_plain_to_controlled(const ScalarBounds& bounds, const GlPlusCertificate& c,
                                         ExponentVariant variant) {
  const double root = c.sqrt_norm(), inv_root = c.inv_sqrt_norm();
  const double lower = variant == ExponentVariant::Derived ? bounds.lower / (inv_root * inv_root)
                                                           : bounds.lower * inv_root * inv_root;
  return {lower, bounds.upper * root * root};
}

// --------------------------------------------------------------- inversion

namespace {

// The Neumann recursion restricted to the structurally nonzero entries of a
// module element. Under a diagonal algebra the n x k compact form evolves
// row by row through the k x k blocks M_p, which keeps long iterations on
// large commutative algebras cheap.
class CompactOperator {
 public:
  explicit CompactOperator(const ModuleOperator& t) : d_(t.descriptor()) {
    if (diagonal()) {
      const int n = d_.dim(), k = d_.rank;
      blocks_.assign(n, Matrix(k, k));
      for (int p = 0; p < n; ++p)
        for (int j = 0; j < k; ++j)
          for (int i = 0; i < k; ++i) blocks_[p](j, i) = t.flattened()(j * n + p, i * n + p);
    } else {
      full_ = t.flattened();
    }
  }

  Matrix compress(const ModuleElement& x) const {
    if (!diagonal()) return x.block_row();
    const int n = d_.dim();
    Matrix c(n, d_.rank);
    for (int p = 0; p < n; ++p)
      for (int j = 0; j < d_.rank; ++j) c(p, j) = x.block_row()(p, j * n + p);
    return c;
  }

  ModuleElement expand(const Matrix& c) const {
    if (!diagonal()) return {d_, c};
    const int n = d_.dim();
    Matrix row = Matrix::Zero(n, d_.flat_size());
    for (int p = 0; p < n; ++p)
      for (int j = 0; j < d_.rank; ++j) row(p, j * n + p) = c(p, j);
    return {d_, std::move(row)};
  }

  // out = c M, without allocating in the diagonal case.
  void apply(const Matrix& c, Matrix& out) const {
    if (!diagonal()) {
      out.noalias() = c * full_;
      return;
    }
    out.resize(c.rows(), c.cols());
    for (Eigen::Index p = 0; p < c.rows(); ++p) {
      const Matrix& block = blocks_[p];
      for (Eigen::Index i = 0; i < c.cols(); ++i) {
        Complex sum = 0.0;
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
          // written out: std::complex multiplication checks for inf/nan on every call
          const Complex a = c(p, j), b = block(j, i);
          sum += Complex(a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real());
        }
        out(p, i) = sum;
      }
    }
  }

  double norm(const Matrix& c) const {
    if (!diagonal()) {
      const Matrix gram = c * c.adjoint();
      const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
      return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    }
    double best = 0.0;
    for (Eigen::Index p = 0; p < c.rows(); ++p) best = std::max(best, c.row(p).squaredNorm());
    return std::sqrt(best);
  }

 private:
  bool diagonal() const { return d_.algebra.structure == Structure::Diagonal; }

  ModuleDescriptor d_;
  std::vector<Matrix> blocks_;
  Matrix full_;
};

// Iterates until the residual reaches `target`, or until `guaranteed`
// iterations (when > 0) have run. The residual is carried by its own
// recursion r <- r - B^-1 S_C r, so each step contracts it by at most
// ||I - B^-1 S_C||. Without a guaranteed count, the true residual y - S_C x
// is recomputed once the recursion reaches the target, and the iteration
// resumes from it if rounding left it above the target.
NeumannResult run_neumann(const ModuleOperator& s_c, const ScalarBounds& bounds, const ModuleElement& y,
                          double target, long guaranteed, int max_iter) {
  require_same(s_c.descriptor(), y.descriptor(), "neumann_inverse_apply");
  if (!bounds.valid()) fail(ErrorCode::InvalidArgument, "Neumann inversion needs valid bounds");
  const CompactOperator op(s_c);
  const double step = 1.0 / bounds.upper;
  const Matrix rhs = op.compress(y);

  Matrix x = Matrix::Zero(rhs.rows(), rhs.cols());
  Matrix residual = rhs;
  Matrix image(rhs.rows(), rhs.cols());
  double r = op.norm(residual);
  NeumannResult result{ModuleElement::zero(y.descriptor()), {r}, 0};
  double last_true = r;
  for (;;) {
    while (r > target && !(guaranteed > 0 && result.iterations >= guaranteed)) {
      if (result.iterations >= max_iter || !std::isfinite(r))
        fail(ErrorCode::MaxIterExceeded, "residual " + std::to_string(r) + " after " +
                                             std::to_string(result.iterations) + " iterations");
      x += step * residual;
      op.apply(residual, image);
      residual -= step * image;
      r = op.norm(residual);
      result.residuals.push_back(r);
      ++result.iterations;
    }
    if (guaranteed > 0) break;
    op.apply(x, image);
    Matrix true_residual = rhs - image;
    const double t = op.norm(true_residual);
    if (t <= target) break;
    if (!(t < last_true))
      fail(ErrorCode::MaxIterExceeded, "residual stagnated at " + std::to_string(t) + " after " +
                                           std::to_string(result.iterations) + " iterations");
    last_true = t;
    residual = std::move(true_residual);
    r = t;
    result.residuals.push_back(r);
  }
  result.solution = op.expand(x);
  return result;
}

}  // namespace

NeumannResult neumann_inverse_apply(const ModuleOperator& s_c, const ScalarBounds& bounds,
                                    const ModuleElement& y, double tol, int max_iter) {
  return run_neumann(s_c, bounds, y, tol * module_norm(y), 0, max_iter);
}

double contraction_norm(const ModuleOperator& s, const ScalarBounds& bounds) {
  const ModuleOperator id = ModuleOperator::identity(s.descriptor());
  return op_norm(op_subtract(id, op_scale(s, 1.0 / bounds.upper)));
}

ReconstructResult reconstruct(const FrameFamily& f, const GlPlusCertificate& c, const ModuleElement& x,
                              double tol, int max_iter) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "reconstruction tolerance must be > 0");
  FrameReport report = is_controlled_frame(f, c);
  if (!report.is_frame) fail(ErrorCode::NotAFrame, "family is not a controlled frame for this controller");
  const ModuleElement y = controlled_synthesis(f, c, analysis(f, x));
  const ScalarBounds& b = report.bounds;

  // The error after m steps is at most q^m ||x||, q = (B - A) / B; the
  // residual test alone would need tol * A / B, which can sit below the
  // rounding floor for badly conditioned frames.
  const double q = (b.upper - b.lower) / b.upper;
  long guaranteed = 1;
  if (q > 0.0) {
    const double m = std::ceil(std::log(tol) / std::log(q));
    guaranteed = std::max(1L, static_cast<long>(std::min(m, 1e15)));
  }
  NeumannResult neumann = run_neumann(report.op, b, y, tol * b.lower / b.upper * module_norm(y), guaranteed, max_iter);
  ModuleElement estimate = neumann.solution;
  return {std::move(estimate), std::move(neumann), b};
}

// --------------------------------------------------------------- transform

void require_transform_preconditions(const ModuleOperator& k, const GlPlusCertificate& c, double tol) {
  require_same(k.descriptor(), c.descriptor(), "transform");
  if (!is_surjective(k, tol)) fail(ErrorCode::NotSurjective, "K is not surjective");
  const double defect = op_norm(op_subtract(compose(k, c.op()), compose(c.op(), k)));
  if (defect > tol * op_norm(k) * op_norm(c.op()))
    fail(ErrorCode::NonCommuting, "||KC - CK|| = " + std::to_string(defect));
}

namespace {

FrameFamily push_forward(const ModuleOperator& k, const FrameFamily& f) {
  std::vector<ModuleElement> vectors;
  vectors.reserve(f.size());
  for (const auto& v : f.vectors()) vectors.push_back(apply(k, v));
  return {f.module(), f.space(), std::move(vectors)};
}

// ||(K K^*)^-1||^-1
double gram_lower(const ModuleOperator& k) {
  return 1.0 / op_norm(op_invert(compose(k, op_adjoint(k))));
}

}  // namespace

TransformResult transform_frame(const ModuleOperator& k, const FrameFamily& f, const GlPlusCertificate& c,
                                double tol) {
  require_same(k.descriptor(), f.module(), "transform_frame");
  require_transform_preconditions(k, c, tol);
  const ScalarBounds b = optimal_scalar_bounds(controlled_frame_operator(f, c), tol);
  const double k_norm = op_norm(k);
  return {push_forward(k, f), {b.lower * gram_lower(k), b.upper * k_norm * k_norm}};
}

// ---------------------------------------------------------------- *-bounds

StarVerification verify_star_bounds(const FrameFamily& f, const GlPlusCertificate& c, const StarBounds& sb,
                                    std::span<const ModuleElement> samples, double tol) {
  require_same(sb.lower.descriptor(), f.module().algebra, "star lower bound");
  require_same(sb.upper.descriptor(), f.module().algebra, "star upper bound");
  const std::vector<ModuleElement> cf = controlled_vectors(f, c);
  const AlgebraElement lower_adj = adjoint(sb.lower), upper_adj = adjoint(sb.upper);

  StarVerification out;
  out.holds = true;
  out.samples = static_cast<int>(samples.size());
  for (const auto& x : samples) {
    const AlgebraElement xx = inner_product(x, x);
    const AlgebraElement middle = middle_term(f, cf, x);
    const AlgebraElement lo = mul(mul(sb.lower, xx), lower_adj);
    const AlgebraElement hi = mul(mul(sb.upper, xx), upper_adj);
    out.holds = out.holds && loewner_leq(lo, middle, tol) && loewner_leq(middle, hi, tol);
    out.max_lower_gap = std::max(out.max_lower_gap, operator_norm(subtract(middle, lo)));
    out.max_upper_gap = std::max(out.max_upper_gap, operator_norm(subtract(hi, middle)));
    out.scale = std::max(out.scale, operator_norm(middle));
  }
  return out;
}

StarVerification verify_star_bounds(const FrameFamily& f, const GlPlusCertificate& c, const StarBounds& sb,
                                    double tol, int samples, std::uint64_t seed) {
  const auto xs = draw_samples(f.module(), samples, seed);
  StarVerification out = verify_star_bounds(f, c, sb, xs, tol);
  out.seed = seed;
  return out;
}

StarBounds derive_tight_star_bound(const FrameFamily& f, const GlPlusCertificate& c, double tol) {
  const ModuleDescriptor& d = f.module();
  if (d.algebra.structure != Structure::Diagonal)
    fail(ErrorCode::NotCommutative, "tight *-bound extraction needs a diagonal (commutative) algebra");
  if (d.rank != 1) fail(ErrorCode::NotMultiplicationOperator, "tight *-bound extraction needs rank 1");

  const ModuleOperator s_c = controlled_frame_operator(f, c);
  const AlgebraElement unit = AlgebraElement::identity(d.algebra);
  const AlgebraElement symbol = apply(s_c, ModuleElement::from_components(d, {unit})).component(0);

  // S_C x must equal x s on every probe.
  const double scale = std::max(1.0, operator_norm(symbol));
  for (int probe = 0; probe < d.flat_size(); ++probe) {
    const ModuleElement x = ModuleElement::basis(d, probe);
    const AlgebraElement expected = mul(x.component(0), symbol);
    if (max_abs_diff(apply(s_c, x).component(0), expected) > tol * scale)
      fail(ErrorCode::NotMultiplicationOperator, "S_C is not multiplication by S_C(1)");
  }
  const AlgebraElement root = psd_sqrt(symbol, tol);
  return {root, root};
}

StarBounds convert_star_bounds(const StarBounds& sb, const GlPlusCertificate& c, ConversionDirection direction) {
  const double root = c.sqrt_norm(), inv_root = c.inv_sqrt_norm();
  if (direction == ConversionDirection::ControlledToPlain)
    return {scale(sb.lower, 1.0 / root), scale(sb.upper, inv_root)};
  return {scale(sb.lower, 1.0 / inv_root), scale(sb.upper, root)};
}

StarTransformResult transform_star_frame(const ModuleOperator& k, const FrameFamily& f,
                                         const GlPlusCertificate& c, const StarBounds& sb, double tol) {
  require_same(k.descriptor(), f.module(), "transform_star_frame");
  if (!is_nonzero(sb.lower) || !is_nonzero(sb.upper))
    fail(ErrorCode::InvalidArgument, "*-bounds must be nonzero");
  require_transform_preconditions(k, c, tol);
  return {push_forward(k, f), {scale(sb.lower, std::sqrt(gram_lower(k))), scale(sb.upper, op_norm(k))}};
}

}  // namespace cframe

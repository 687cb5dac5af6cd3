#include "normnet/pearson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "normnet/errors.hpp"

namespace normnet {

namespace {

constexpr double kTypeTol = 1e-9;

struct Coefficients {
  double a, b0, b1, b2, c;
};

Coefficients coefficients_from_central_moments(double m2, double m3, double m4) {
  const double c = 10.0 * m4 * m2 - 12.0 * m3 * m3 - 18.0 * m2 * m2 * m2;
  const double scale =
      10.0 * std::fabs(m4 * m2) + 12.0 * m3 * m3 + 18.0 * m2 * m2 * m2;
  if (std::fabs(c) <= 1e-12 * scale) {
    throw DegenerateDenominatorError(
        "pearson_from_moments: coefficient denominator C vanishes for these moments");
  }
  Coefficients k;
  k.c = c;
  k.b1 = k.a = -m3 * (m4 + 3.0 * m2 * m2) / c;
  k.b0 = -m2 * (4.0 * m2 * m4 - 3.0 * m3 * m3) / c;
  k.b2 = -(2.0 * m2 * m4 - 3.0 * m3 * m3 - 6.0 * m2 * m2 * m2) / c;
  return k;
}

PearsonType classify(double skew, double kurt, const Coefficients& k) {
  const double beta1 = skew * skew;
  const double beta2 = kurt;
  if (std::fabs(skew) < kTypeTol && std::fabs(beta2 - 3.0) < kTypeTol) {
    return PearsonType::Gaussian;
  }
  // Quadratic degenerates to linear: the Gamma line 2*b2 - 3*b1 - 6 = 0.
  const double lin = 2.0 * beta2 - 3.0 * beta1 - 6.0;
  const double lin_scale = 2.0 * beta2 + 3.0 * beta1 + 6.0;
  if (std::fabs(lin) <= kTypeTol * lin_scale) return PearsonType::III;
  if (std::fabs(skew) < kTypeTol) {
    return beta2 < 3.0 ? PearsonType::II : PearsonType::VII;
  }
  // (4*beta2 - 3*beta1) > 0 everywhere in the feasible region.
  const double kappa = beta1 * (beta2 + 3.0) * (beta2 + 3.0) /
                       (4.0 * (4.0 * beta2 - 3.0 * beta1) * lin);
  if (kappa < 0.0) return PearsonType::I;
  if (std::fabs(kappa - 1.0) <= 1e-9) return PearsonType::V;
  return kappa < 1.0 ? PearsonType::IV : PearsonType::VI;
}

}  // namespace

std::string pearson_type_name(PearsonType t) {
  switch (t) {
    case PearsonType::Gaussian: return "gaussian";
    case PearsonType::I: return "I";
    case PearsonType::II: return "II";
    case PearsonType::III: return "III";
    case PearsonType::IV: return "IV";
    case PearsonType::V: return "V";
    case PearsonType::VI: return "VI";
    case PearsonType::VII: return "VII";
  }
  return "?";
}

bool pearson_feasible(double skew, double kurt) {
  return kurt > skew * skew + 1.0;
}

PearsonSpec pearson_from_moments(double mean, double sd, double skew, double kurt) {
  if (!(sd > 0.0)) {
    throw InvalidParameterError("pearson_from_moments: sd must be > 0");
  }
  if (!pearson_feasible(skew, kurt)) {
    throw InfeasibleMomentsError(
        "pearson_from_moments: kurt must exceed skew^2 + 1");
  }
  const double m2 = sd * sd;
  const double m3 = skew * sd * sd * sd;
  const double m4 = kurt * m2 * m2;
  const Coefficients k = coefficients_from_central_moments(m2, m3, m4);
  PearsonSpec spec;
  spec.mean = mean;
  spec.sd = sd;
  spec.skew = skew;
  spec.kurt = kurt;
  spec.a = k.a;
  spec.b0 = k.b0;
  spec.b1 = k.b1;
  spec.b2 = k.b2;
  spec.type = classify(skew, kurt, k);
  return spec;
}

// ---------------------------------------------------------------------------
// Sampler
// ---------------------------------------------------------------------------

namespace {

// Unnormalized log density of a Type IV member (complex roots, b2 < 0):
//   log f(x) = (1/(2 b2)) log|Q(x)| + C_atan * atan((2 b2 x + b1)/sqrt(D))
// with Q(x) = b0 + b1 x + b2 x^2 and D = 4 b0 b2 - b1^2 > 0.
struct TypeIvDensity {
  double b0, b1, b2, a;
  double sqrt_d;
  double c_atan;

  explicit TypeIvDensity(const Coefficients& k)
      : b0(k.b0), b1(k.b1), b2(k.b2), a(k.a) {
    const double d = 4.0 * b0 * b2 - b1 * b1;
    sqrt_d = std::sqrt(d);
    c_atan = -(a + b1 / (2.0 * b2)) * (2.0 / sqrt_d);
  }

  double log_density(double x) const {
    const double q = b0 + x * (b1 + x * b2);
    return std::log(std::fabs(q)) / (2.0 * b2) +
           c_atan * std::atan((2.0 * b2 * x + b1) / sqrt_d);
  }
};

// Adaptive Simpson on [lo, hi] for a positive smooth integrand.
template <typename F>
double adaptive_simpson(const F& f, double lo, double hi, double flo, double fmid,
                        double fhi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid);
  const double rm = 0.5 * (mid + hi);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1);
}

template <typename F>
double integrate(const F& f, double lo, double hi, double tol) {
  const double flo = f(lo);
  const double fhi = f(hi);
  const double fmid = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 24);
}

struct InversionTable {
  std::vector<double> x;    // node abscissae
  std::vector<double> cdf;  // normalized CDF at nodes, cdf.front()=0, back()=1
  std::vector<double> pdf;  // normalized density at nodes
  double total = 1.0;       // unnormalized mass in mode-relative units
  double shift = 0.0;       // affine correction to exact mean 0 / sd 1
  double scale = 1.0;
};

InversionTable build_type_iv_table(const Coefficients& k) {
  const TypeIvDensity den(k);
  const double mode = k.a;  // f'(x) = 0 exactly at x = a
  const double log_fmode = den.log_density(mode);
  auto rel = [&](double x) { return std::exp(den.log_density(x) - log_fmode); };

  // Expand the truncation points until both the density and the x^4-weighted
  // tail mass are negligible; tails decay like |x|^(1/b2) with 1/b2 < -5.
  auto far_enough = [&](double x) {
    const double lf = den.log_density(x) - log_fmode;
    return lf + 5.0 * std::log1p(std::fabs(x - mode)) < -52.0;
  };
  double lo = mode - 1.0, hi = mode + 1.0, step = 1.0;
  while (!far_enough(lo)) {
    step *= 2.0;
    lo -= step;
  }
  step = 1.0;
  while (!far_enough(hi)) {
    step *= 2.0;
    hi += step;
  }

  // Nodes uniform in t with x = mode + sinh(t): dense near the mode,
  // logarithmic in the tails.
  const int cells = 1024;
  const double tlo = std::asinh(lo - mode);
  const double thi = std::asinh(hi - mode);
  InversionTable table;
  table.x.resize(cells + 1);
  table.pdf.resize(cells + 1);
  table.cdf.assign(cells + 1, 0.0);
  for (int i = 0; i <= cells; ++i) {
    const double t = tlo + (thi - tlo) * i / cells;
    table.x[i] = mode + std::sinh(t);
    table.pdf[i] = rel(table.x[i]);
  }
  double total = 0.0, sum_x = 0.0, sum_x2 = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double a = table.x[i], b = table.x[i + 1];
    const double mass = integrate(rel, a, b, 1e-12);
    total += mass;
    sum_x += integrate([&](double x) { return x * rel(x); }, a, b, 1e-12);
    sum_x2 += integrate([&](double x) { return x * x * rel(x); }, a, b, 1e-12);
    table.cdf[i + 1] = total;
  }
  table.total = total;
  for (auto& c : table.cdf) c /= total;
  for (auto& p : table.pdf) p /= total;
  table.cdf.back() = 1.0;
  const double m1 = sum_x / total;
  const double var = sum_x2 / total - m1 * m1;
  table.shift = m1;
  table.scale = std::sqrt(var);
  return table;
}

// Inverts the tabulated CDF at u, refining inside the bracketing cell with
// safeguarded Newton steps against the quadrature CDF.
double invert_table(const InversionTable& table, const TypeIvDensity& den,
                    double log_fmode, double u) {
  u = std::min(std::max(u, 0.0), 1.0);
  const auto it = std::upper_bound(table.cdf.begin(), table.cdf.end(), u);
  std::size_t cell = it == table.cdf.begin()
                         ? 0
                         : static_cast<std::size_t>(it - table.cdf.begin()) - 1;
  cell = std::min(cell, table.x.size() - 2);
  const double cell_left = table.x[cell];
  const double clo = table.cdf[cell];
  const double chi = table.cdf[cell + 1];
  double xlo = cell_left, xhi = table.x[cell + 1];
  auto rel = [&](double x) {
    return std::exp(den.log_density(x) - log_fmode) / table.total;
  };
  // Linear initial guess within the cell.
  double x = chi > clo ? xlo + (xhi - xlo) * (u - clo) / (chi - clo)
                       : 0.5 * (xlo + xhi);
  for (int iter = 0; iter < 60; ++iter) {
    const double g = clo + integrate(rel, cell_left, x, 1e-13) - u;
    if (std::fabs(g) < 1e-12) break;
    if (g > 0.0) {
      xhi = x;
    } else {
      xlo = x;
    }
    const double fx = rel(x);
    double next = fx > 0.0 ? x - g / fx : 0.5 * (xlo + xhi);
    if (!(next > xlo && next < xhi)) next = 0.5 * (xlo + xhi);
    if (std::fabs(next - x) < 1e-14 * (1.0 + std::fabs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace

struct PearsonSampler::Impl {
  PearsonType type = PearsonType::Gaussian;
  double mean = 0.0;
  double sd = 1.0;

  // Type I/II (scaled Beta) and VI (Beta prime) share root/exponent data.
  double r1 = 0.0, r2 = 0.0;
  double alpha = 0.0, beta = 0.0;
  bool right_side = true;
  double shift = 0.0, scale = 1.0;  // affine map to exact mean 0 / sd 1

  // Type III.
  double gamma_shape = 0.0;
  double skew_sign = 1.0;

  // Type V.
  double root = 0.0, inv_gamma_shape = 0.0, inv_gamma_scale = 0.0;

  // Type VII.
  double dof = 0.0, t_scale = 1.0;

  // Type IV.
  InversionTable table;
  double log_fmode = 0.0;
  TypeIvDensity* density = nullptr;

  ~Impl() { delete density; }

  double draw_shape(RandomStream& rng) const {
    switch (type) {
      case PearsonType::Gaussian:
        return rng.normal();
      case PearsonType::I:
      case PearsonType::II: {
        const double b = rng.beta(alpha, beta);
        return (r1 + (r2 - r1) * b - shift) / scale;
      }
      case PearsonType::III: {
        const double g = rng.gamma(gamma_shape, 1.0);
        return skew_sign * (g - gamma_shape) / std::sqrt(gamma_shape);
      }
      case PearsonType::V: {
        const double g = rng.gamma(inv_gamma_shape, 1.0);
        const double x = root + inv_gamma_scale / g;
        return (x - shift) / scale;
      }
      case PearsonType::VI: {
        const double y = rng.gamma(alpha, 1.0) / rng.gamma(beta, 1.0);
        const double x = right_side ? r2 + (r2 - r1) * y : r1 - (r2 - r1) * y;
        return (x - shift) / scale;
      }
      case PearsonType::VII:
        return rng.student_t(dof) * t_scale;
      case PearsonType::IV: {
        const double u = rng.uniform();
        const double x = invert_table(table, *density, log_fmode, u);
        return (x - table.shift) / table.scale;
      }
    }
    return 0.0;
  }
};

PearsonSampler::PearsonSampler(const PearsonSpec& spec) : impl_(new Impl) {
  impl_->mean = spec.mean;
  impl_->sd = spec.sd;
  impl_->type = spec.type;

  // Work with the unit-variance shape; draws are rescaled afterwards.
  const double s = spec.skew;
  const double k = spec.kurt;
  if (spec.type == PearsonType::Gaussian) return;

  if (spec.type == PearsonType::III) {
    // Gamma matches the Type III line exactly: shape 4/skew^2 gives
    // skew 2/sqrt(shape) and kurtosis 3 + 1.5 skew^2.
    impl_->gamma_shape = 4.0 / (s * s);
    impl_->skew_sign = s < 0.0 ? -1.0 : 1.0;
    return;
  }
  if (spec.type == PearsonType::VII) {
    impl_->dof = 4.0 + 6.0 / (k - 3.0);
    impl_->t_scale = std::sqrt((impl_->dof - 2.0) / impl_->dof);
    return;
  }

  const Coefficients kk =
      coefficients_from_central_moments(1.0, s, k);  // unit-variance shape
  const double disc = kk.b1 * kk.b1 - 4.0 * kk.b0 * kk.b2;

  if (spec.type == PearsonType::I || spec.type == PearsonType::II) {
    const double sq = std::sqrt(disc);
    double r1 = (-kk.b1 - sq) / (2.0 * kk.b2);
    double r2 = (-kk.b1 + sq) / (2.0 * kk.b2);
    if (r1 > r2) std::swap(r1, r2);
    const double p = (r1 - kk.a) / (kk.b2 * (r1 - r2));
    const double q = (r2 - kk.a) / (kk.b2 * (r2 - r1));
    impl_->r1 = r1;
    impl_->r2 = r2;
    impl_->alpha = p + 1.0;
    impl_->beta = q + 1.0;
    if (!(impl_->alpha > 0.0 && impl_->beta > 0.0)) {
      throw InfeasibleMomentsError("pearson sampler: Type I exponents not integrable");
    }
    const double ab = impl_->alpha + impl_->beta;
    const double bmean = impl_->alpha / ab;
    const double bvar = impl_->alpha * impl_->beta / (ab * ab * (ab + 1.0));
    impl_->shift = r1 + (r2 - r1) * bmean;
    impl_->scale = (r2 - r1) * std::sqrt(bvar);
    return;
  }
  if (spec.type == PearsonType::V) {
    const double r = -kk.b1 / (2.0 * kk.b2);
    const double shape = -1.0 - 1.0 / kk.b2;
    const double sc = (r - kk.a) / kk.b2;
    if (!(shape > 2.0)) {
      throw InfeasibleMomentsError("pearson sampler: Type V shape not integrable");
    }
    impl_->root = r;
    impl_->inv_gamma_shape = shape;
    impl_->inv_gamma_scale = sc;
    impl_->shift = r + sc / (shape - 1.0);
    impl_->scale = std::fabs(sc) / ((shape - 1.0) * std::sqrt(shape - 2.0));
    return;
  }
  if (spec.type == PearsonType::VI) {
    const double sq = std::sqrt(disc);
    double r1 = (-kk.b1 - sq) / (2.0 * kk.b2);
    double r2 = (-kk.b1 + sq) / (2.0 * kk.b2);
    if (r1 > r2) std::swap(r1, r2);
    const double p = (r1 - kk.a) / (kk.b2 * (r1 - r2));
    const double q = (r2 - kk.a) / (kk.b2 * (r2 - r1));
    const double tail = -p - q - 1.0;
    impl_->r1 = r1;
    impl_->r2 = r2;
    if (q + 1.0 > 0.0 && tail > 0.0) {
      impl_->right_side = true;  // support (r2, +inf)
      impl_->alpha = q + 1.0;
      impl_->beta = tail;
    } else if (p + 1.0 > 0.0 && tail > 0.0) {
      impl_->right_side = false;  // support (-inf, r1)
      impl_->alpha = p + 1.0;
      impl_->beta = tail;
    } else {
      throw InfeasibleMomentsError("pearson sampler: Type VI exponents not integrable");
    }
    if (!(impl_->beta > 2.0)) {
      throw InfeasibleMomentsError("pearson sampler: Type VI variance does not exist");
    }
    const double w = r2 - r1;
    const double ymean = impl_->alpha / (impl_->beta - 1.0);
    const double yvar = impl_->alpha * (impl_->alpha + impl_->beta - 1.0) /
                        ((impl_->beta - 2.0) * (impl_->beta - 1.0) * (impl_->beta - 1.0));
    impl_->shift = impl_->right_side ? r2 + w * ymean : r1 - w * ymean;
    impl_->scale = w * std::sqrt(yvar);
    return;
  }

  // Type IV: numerical CDF inversion.
  impl_->density = new TypeIvDensity(kk);
  impl_->log_fmode = impl_->density->log_density(kk.a);
  impl_->table = build_type_iv_table(kk);
}

PearsonSampler::~PearsonSampler() = default;
PearsonSampler::PearsonSampler(PearsonSampler&&) noexcept = default;
PearsonSampler& PearsonSampler::operator=(PearsonSampler&&) noexcept = default;

double PearsonSampler::draw(RandomStream& rng) const {
  return impl_->mean + impl_->sd * impl_->draw_shape(rng);
}

PearsonType PearsonSampler::type() const { return impl_->type; }

}  // namespace normnet

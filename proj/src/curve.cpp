#include "abloop/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include "abloop/error.hpp"

namespace abloop {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

// ---------------------------------------------------------------- CurveSpec

CurveSpec CurveSpec::circle(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::precondition, "circle radius must be positive");
  CurveSpec c;
  c.length = 2.0 * kPi * radius;
  c.kind = Kind::fourier;
  c.data = {-1.0 / radius};
  c.label = "circle R=" + std::to_string(radius);
  return c;
}

CurveSpec CurveSpec::perturbed_circle(double eps) {
  CurveSpec c;
  c.length = 2.0 * kPi;
  c.kind = Kind::fourier;
  c.data = {-1.0, 0.0, 0.0, eps, 0.0};
  c.label = "perturbed circle eps=" + std::to_string(eps);
  return c;
}

CurveSpec CurveSpec::parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed curve JSON: ") + e.what());
  }
  CurveSpec c;
  try {
    c.length = j.at("length").get<double>();
    const auto& curv = j.at("curvature");
    const auto kind = curv.at("kind").get<std::string>();
    if (kind == "samples") {
      c.kind = Kind::samples;
    } else if (kind == "fourier") {
      c.kind = Kind::fourier;
    } else {
      throw Error(ErrorKind::io, "curvature.kind must be \"samples\" or \"fourier\", got \"" + kind + "\"");
    }
    c.data = curv.at("data").get<std::vector<double>>();
    c.label = j.value("label", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io, std::string("curve JSON missing or mistyped field: ") + e.what());
  }
  if (!(c.length > 0.0)) throw Error(ErrorKind::geometry, "length must be positive");
  if (c.data.empty()) throw Error(ErrorKind::geometry, "curvature.data is empty");
  return c;
}

CurveSpec CurveSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open curve file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::string CurveSpec::to_json() const {
  nlohmann::json j;
  j["length"] = length;
  j["curvature"] = {{"kind", kind == Kind::samples ? "samples" : "fourier"}, {"data", data}};
  j["label"] = label;
  return j.dump(2);
}

// ---------------------------------------------------------------- FrameField

FrameField FrameField::build(const CurveSpec& spec, int n_samples) {
  FrameOptions opt;
  opt.n_samples = n_samples;
  return build(spec, opt);
}

FrameField FrameField::build(const CurveSpec& spec, const FrameOptions& opt) {
  if (!(spec.length > 0.0)) throw Error(ErrorKind::geometry, "curve length must be positive");
  if (spec.data.empty()) throw Error(ErrorKind::geometry, "no curvature data");
  if (opt.n_samples < 16) throw Error(ErrorKind::precondition, "n_samples must be >= 16");

  FrameField f;
  f.length_ = spec.length;
  f.label_ = spec.label;
  f.omega_ = 2.0 * kPi / spec.length;

  if (spec.kind == CurveSpec::Kind::fourier) {
    f.gamma_mean_ = spec.data[0];
    for (std::size_t i = 1; i < spec.data.size(); i += 2) {
      f.gamma_cos_.push_back(spec.data[i]);
      f.gamma_sin_.push_back(i + 1 < spec.data.size() ? spec.data[i + 1] : 0.0);
    }
  } else {
    // trigonometric interpolant of the samples
    const int n = static_cast<int>(spec.data.size());
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> bins;
    fft.fwd(bins, spec.data);
    f.gamma_mean_ = bins[0].real() / n;
    for (int k = 1; k <= n / 2; ++k) {
      const double scale = (2 * k == n) ? 1.0 / n : 2.0 / n;
      f.gamma_cos_.push_back(scale * bins[k].real());
      f.gamma_sin_.push_back(2 * k == n ? 0.0 : -scale * bins[k].imag());
    }
  }

  f.total_curvature_ = f.gamma_mean_ * spec.length;
  const double turning_defect = std::abs(std::abs(f.total_curvature_) - 2.0 * kPi);
  if (turning_defect > opt.closure_tol) {
    throw Error(ErrorKind::geometry,
                "non-closing curvature data: |int gamma ds| - 2 pi = " + fmt(turning_defect));
  }
  f.orientation_ = f.total_curvature_ < 0.0 ? 1 : -1;

  // Fourier series of exp(iH); H is 2 pi-quasi-periodic so exp(iH) is L-periodic.
  const int n_modes = static_cast<int>(f.gamma_cos_.size());
  const int n_fine = std::max(4096, next_pow2(16 * (n_modes + 1)));
  std::vector<std::complex<double>> tangent(n_fine);
  for (int i = 0; i < n_fine; ++i) {
    const double s = spec.length * i / n_fine;
    tangent[i] = std::polar(1.0, f.tangent_angle(s));
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> bins;
  fft.fwd(bins, tangent);
  for (int i = 0; i < n_fine; ++i) {
    const int k = i < n_fine / 2 ? i : i - n_fine;
    const std::complex<double> c = bins[i] / static_cast<double>(n_fine);
    if (k == 0) {
      f.tangent_mean_ = c;
      continue;
    }
    if (std::abs(c) > 1e-18) {
      f.tangent_k_.push_back(k);
      f.tangent_coef_.push_back(c);
    }
  }
  f.closure_residual_ = std::abs(f.tangent_mean_) * spec.length;
  if (f.closure_residual_ > opt.closure_tol * std::max(1.0, spec.length)) {
    throw Error(ErrorKind::geometry, "reconstructed loop does not close: |Gamma(L) - Gamma(0)| = " +
                                         fmt(f.closure_residual_));
  }
  f.position_offset_ = {opt.offset_x, opt.offset_y};

  const int n = opt.n_samples;
  f.s_.resize(n);
  f.gamma_s_.resize(n);
  f.dgamma_s_.resize(n);
  f.d2gamma_s_.resize(n);
  f.H_s_.resize(n);
  f.x_s_.resize(n);
  f.y_s_.resize(n);
  double min_r = std::numeric_limits<double>::infinity();
  double angle_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = spec.length * i / n;
    const FramePoint g = f.at(s);
    f.s_[i] = s;
    f.gamma_s_[i] = g.gamma;
    f.dgamma_s_[i] = g.dgamma;
    f.d2gamma_s_[i] = g.d2gamma;
    f.H_s_[i] = g.H;
    f.x_s_[i] = g.x;
    f.y_s_[i] = g.y;
    f.gamma_plus_ = std::max(f.gamma_plus_, std::abs(g.gamma));
    const double r2 = g.x * g.x + g.y * g.y;
    min_r = std::min(min_r, std::sqrt(r2));
    angle_sum += (g.x * g.ty - g.y * g.tx) / r2;
  }
  f.min_dist_ = min_r;
  f.winding_ = static_cast<int>(std::lround(angle_sum * spec.length / n / (2.0 * kPi)));
  if (f.winding_ == 0) {
    throw Error(ErrorKind::geometry, "loop does not enclose the solenoid at the origin");
  }
  const double curvature_limit = f.gamma_plus_ > 0.0 ? 1.0 / f.gamma_plus_ : min_r;
  f.a1_ = 0.99 * std::min(curvature_limit, min_r);

  // gamma = Gamma_1''Gamma_2' - Gamma_2''Gamma_1' at five points, second derivatives by differences
  const double h = 1e-3 * spec.length / (2.0 * kPi);
  for (int k = 0; k < 5; ++k) {
    const double s = spec.length * (k + 0.13) / 5.0;
    const FramePoint m = f.at(s - h), c = f.at(s), p = f.at(s + h);
    const double x2 = (p.x - 2.0 * c.x + m.x) / (h * h);
    const double y2 = (p.y - 2.0 * c.y + m.y) / (h * h);
    const double g = x2 * c.ty - y2 * c.tx;
    f.convention_residual_ = std::max(f.convention_residual_, std::abs(g - c.gamma));
  }
  if (f.convention_residual_ > 1e-4 * std::max(1.0, f.gamma_plus_)) {
    throw Error(ErrorKind::geometry, "curvature sign convention check failed, residual " +
                                         fmt(f.convention_residual_));
  }
  return f;
}

double FrameField::gamma(double s) const {
  double v = gamma_mean_;
  for (std::size_t k = 0; k < gamma_cos_.size(); ++k) {
    const double arg = (k + 1) * omega_ * s;
    v += gamma_cos_[k] * std::cos(arg) + gamma_sin_[k] * std::sin(arg);
  }
  return v;
}

double FrameField::dgamma(double s) const {
  double v = 0.0;
  for (std::size_t k = 0; k < gamma_cos_.size(); ++k) {
    const double w = (k + 1) * omega_;
    v += w * (-gamma_cos_[k] * std::sin(w * s) + gamma_sin_[k] * std::cos(w * s));
  }
  return v;
}

double FrameField::d2gamma(double s) const {
  double v = 0.0;
  for (std::size_t k = 0; k < gamma_cos_.size(); ++k) {
    const double w = (k + 1) * omega_;
    v -= w * w * (gamma_cos_[k] * std::cos(w * s) + gamma_sin_[k] * std::sin(w * s));
  }
  return v;
}

double FrameField::tangent_angle(double s) const {
  double v = -gamma_mean_ * s;
  for (std::size_t k = 0; k < gamma_cos_.size(); ++k) {
    const double w = (k + 1) * omega_;
    v -= (gamma_cos_[k] * std::sin(w * s) + gamma_sin_[k] * (1.0 - std::cos(w * s))) / w;
  }
  return v;
}

FramePoint FrameField::at(double s) const {
  FramePoint g;
  g.s = s;
  g.gamma = gamma(s);
  g.dgamma = dgamma(s);
  g.d2gamma = d2gamma(s);
  g.H = tangent_angle(s);
  g.tx = std::cos(g.H);
  g.ty = std::sin(g.H);
  std::complex<double> pos = position_offset_ + tangent_mean_ * (s - 0.5 * length_);
  for (std::size_t j = 0; j < tangent_k_.size(); ++j) {
    const double w = tangent_k_[j] * omega_;
    pos += tangent_coef_[j] * std::polar(1.0, w * s) / std::complex<double>(0.0, w);
  }
  g.x = pos.real();
  g.y = pos.imag();
  return g;
}

// ---------------------------------------------------------------- pointwise coefficients

void check_strip_point(const FrameField& frame, const StripPoint& p) {
  if (!(p.a > 0.0) || p.a > frame.a1()) {
    throw Error(ErrorKind::precondition, "strip halfwidth a=" + fmt(p.a) + " outside (0, a1=" +
                                             fmt(frame.a1()) + "]");
  }
  if (std::abs(p.u) > p.a) {
    throw Error(ErrorKind::precondition, "point u=" + fmt(p.u) + " outside the strip |u| <= a=" + fmt(p.a));
  }
}

StripMapResult strip_map(const FrameField& frame, const StripPoint& p) {
  if (std::abs(p.u) >= frame.a1()) {
    throw Error(ErrorKind::precondition, "out of strip: |u|=" + fmt(std::abs(p.u)) + " >= a1=" + fmt(frame.a1()));
  }
  const FramePoint g = frame.at(p.s);
  StripMapResult r;
  r.x = g.x - p.u * g.ty;
  r.y = g.y + p.u * g.tx;
  r.jacobian = 1.0 + p.u * g.gamma;
  r.near_degenerate = r.jacobian < 0.05;
  return r;
}

double theta(const FramePoint& g, double u) {
  const double d = g.x * g.x + g.y * g.y + u * u - 2.0 * u * (g.x * g.ty - g.y * g.tx);
  if (!(d > 1e-28)) throw Error(ErrorKind::singularity, "theta evaluated on the flux line");
  return 1.0 / d;
}

double theta(const FrameField& frame, const StripPoint& p) {
  check_strip_point(frame, p);
  return theta(frame.at(p.s), p.u);
}

Omega omega(const FramePoint& g, double u, CoeffVariant variant) {
  const double th = theta(g, u);
  const double jac = 1.0 + u * g.gamma;
  Omega o;
  o.omega1 = th * (g.y * g.tx - g.x * g.ty + u) / jac;
  o.omega2 = th * (g.x * g.tx + g.y * g.ty);
  if (variant == CoeffVariant::literal) o.omega2 /= jac;
  return o;
}

Omega omega(const FrameField& frame, const StripPoint& p, CoeffVariant variant) {
  check_strip_point(frame, p);
  return omega(frame.at(p.s), p.u, variant);
}

double effective_potential(const FramePoint& g, double u) {
  const double jinv = 1.0 / (1.0 + u * g.gamma);
  const double j2 = jinv * jinv;
  return 0.5 * j2 * jinv * u * g.d2gamma - 1.25 * j2 * j2 * u * u * g.dgamma * g.dgamma -
         0.25 * j2 * g.gamma * g.gamma;
}

double effective_potential(const FrameField& frame, const StripPoint& p) {
  check_strip_point(frame, p);
  return effective_potential(frame.at(p.s), p.u);
}

double gauge_phase(const FramePoint& g, double c0, double u, CoeffVariant variant) {
  if (u == 0.0 || c0 == 0.0) return 0.0;
  auto integrand = [&](double v) { return omega(g, v, variant).omega2; };
  const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, u, 15, 1e-13);
  return c0 * val;
}

std::vector<double> phase_column(const FramePoint& g, double c0, const std::vector<double>& u, CoeffVariant variant) {
  const int n = static_cast<int>(u.size());
  std::vector<double> K(n, 0.0);
  if (c0 == 0.0) return K;
  int mid = -1;
  for (int j = 0; j < n; ++j)
    if (u[j] == 0.0) mid = j;
  if (mid < 0) throw Error(ErrorKind::precondition, "phase_column needs u = 0 on the grid");
  auto f = [&](double v) { return omega(g, v, variant).omega2; };
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  for (int j = mid + 1; j < n; ++j) K[j] = K[j - 1] + c0 * GK::integrate(f, u[j - 1], u[j], 5, 1e-14);
  for (int j = mid - 1; j >= 0; --j) K[j] = K[j + 1] - c0 * GK::integrate(f, u[j], u[j + 1], 5, 1e-14);
  return K;
}

double gauge_phase(const FrameField& frame, Flux flux, const StripPoint& p, CoeffVariant variant) {
  check_strip_point(frame, p);
  return gauge_phase(frame.at(p.s), flux.c0, p.u, variant);
}

double gauge_phase_ds(const FrameField& frame, Flux flux, const StripPoint& p, CoeffVariant variant) {
  check_strip_point(frame, p);
  if (p.u == 0.0 || flux.c0 == 0.0) return 0.0;
  const double h = frame.length() / frame.n_samples();
  auto k_at = [&](double s) { return gauge_phase(frame.at(s), flux.c0, p.u, variant); };
  return (k_at(p.s - 2 * h) - 8.0 * k_at(p.s - h) + 8.0 * k_at(p.s + h) - k_at(p.s + 2 * h)) / (12.0 * h);
}

double circulation_density(const FramePoint& g, double c0) {
  return c0 * (g.y * g.tx - g.x * g.ty) / (g.x * g.x + g.y * g.y);
}

CoeffBounds coeff_bounds(const FrameField& frame, Flux flux, double a, const CoeffBoundsOptions& opt) {
  const double gp = frame.gamma_plus();
  if (!(a > 0.0) || (gp > 0.0 && a >= 0.5 / gp) || a > frame.a1()) {
    throw Error(ErrorKind::precondition, "coeff_bounds needs 0 < a < 1/(2 gamma_+) and a <= a1; a=" + fmt(a));
  }
  if (opt.n_u < 3 || opt.n_u % 2 == 0) throw Error(ErrorKind::precondition, "coeff_bounds needs odd n_u >= 3");

  CoeffBounds out;
  out.gamma_plus = gp;
  const int ns = opt.n_s > 0 ? opt.n_s : frame.n_samples();
  const int nu = opt.n_u;
  out.s.resize(ns);
  out.u.resize(nu);
  for (int i = 0; i < ns; ++i) out.s[i] = frame.length() * i / ns;
  for (int j = 0; j < nu; ++j) out.u[j] = -a + 2.0 * a * j / (nu - 1);
  out.u[nu / 2] = 0.0;
  out.W.resize(ns, nu);
  out.first_order.resize(ns, nu);

  const double c0 = flux.c0;
  const double h = frame.length() / frame.n_samples();
  for (int i = 0; i < ns; ++i) {
    const double s = out.s[i];
    const FramePoint g = frame.at(s);
    const FramePoint gm2 = frame.at(s - 2 * h), gm1 = frame.at(s - h), gp1 = frame.at(s + h), gp2 = frame.at(s + 2 * h);
    std::vector<double> km2, km1, kp1, kp2;
    if (c0 != 0.0) {
      km2 = phase_column(gm2, c0, out.u, opt.variant);
      km1 = phase_column(gm1, c0, out.u, opt.variant);
      kp1 = phase_column(gp1, c0, out.u, opt.variant);
      kp2 = phase_column(gp2, c0, out.u, opt.variant);
    }
    const double b0 = opt.boundary == FluxBoundary::twisted ? circulation_density(g, c0) : 0.0;
    for (int j = 0; j < nu; ++j) {
      const double u = out.u[j];
      const double jac = 1.0 + u * g.gamma;
      const double th = theta(g, u);
      const Omega om = omega(g, u, opt.variant);
      const double V = effective_potential(g, u);
      const double Ks = c0 == 0.0 ? 0.0 : (km2[j] - 8.0 * km1[j] + 8.0 * kp1[j] - kp2[j]) / (12.0 * h);
      const double Gs = Ks - b0;
      const double Ku = c0 * om.omega2;
      double W = c0 * c0 * th + Gs * Gs / (jac * jac) + V + 2.0 * c0 * om.omega1 * Gs;
      if (opt.variant == CoeffVariant::derived) {
        W -= c0 * c0 * om.omega2 * om.omega2;
      } else {
        W += Ku * Ku - 2.0 * c0 * om.omega2 * Gs;
      }
      const double first = c0 * om.omega1 + Gs / (jac * jac);
      out.W(i, j) = W;
      out.first_order(i, j) = first;
      out.N = std::max(out.N, 2.0 * std::abs(first));
      out.M = std::max(out.M, std::abs(W + 0.25 * g.gamma * g.gamma));
    }
  }
  return out;
}

}  // namespace abloop

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "abloop/asymptotics.hpp"
#include "abloop/error.hpp"

namespace abloop {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

std::string report_csv(const SweepReport& rep) {
  const bool flux = rep.axis == SweepReport::Axis::flux;
  std::ostringstream os;
  os << "param,j,mu,zeta_plus,zeta_minus,tau_plus,tau_minus,kappa_plus,kappa_minus,err,regime_flags";
  if (flux) os << ",lambda_mid,current";
  os << '\n';
  for (const SweepRecord& r : rep.records) {
    os << num(r.param) << ',' << r.j << ',' << num(r.mu) << ',' << num(r.zeta_plus) << ',' << num(r.zeta_minus) << ','
       << num(r.tau_plus) << ',' << num(r.tau_minus) << ',' << num(r.kappa_plus) << ',' << num(r.kappa_minus) << ','
       << num(r.err) << ',' << r.regime_flags;
    if (flux) os << ',' << num(r.lambda_mid) << ',' << num(r.current);
    os << '\n';
  }
  return os.str();
}

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<PlotSeries>& series, bool logx, bool logy) {
  const double W = 1000, H = 700, L = 100, R = 220, T = 60, B = 80;
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((logx && s.x[i] <= 0) || (logy && s.y[i] <= 0)) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double py = 0.05 * (y1 - y0);
  y0 -= py;
  y1 += py;
  auto X = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto Y = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"700\" viewBox=\"0 0 1000 700\">\n";
  os << "<rect width=\"1000\" height=\"700\" fill=\"white\"/>\n";
  os << "<text x=\"500\" y=\"35\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"20\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double fx = x0 + k * (x1 - x0) / 5, fy = y0 + k * (y1 - y0) / 5;
    const double px = L + k * (W - L - R) / 5, pyy = H - B - k * (H - T - B) / 5;
    const double vx = logx ? std::pow(10.0, fx) : fx, vy = logy ? std::pow(10.0, fy) : fy;
    os << "<line x1=\"" << px << "\" y1=\"" << H - B << "\" x2=\"" << px << "\" y2=\"" << H - B + 6
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px << "\" y=\"" << H - B + 24 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << std::setprecision(4) << vx << "</text>\n";
    os << "<line x1=\"" << L - 6 << "\" y1=\"" << pyy << "\" x2=\"" << L << "\" y2=\"" << pyy << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << L - 10 << "\" y=\"" << pyy + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">"
       << vy << "</text>\n" << std::setprecision(6);
  }
  os << "<text x=\"" << L + (W - L - R) / 2 << "\" y=\"" << H - 25 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << escape(xlabel) << (logx ? " (log)" : "") << "</text>\n";
  os << "<text transform=\"translate(30," << T + (H - T - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << escape(ylabel) << (logy ? " (log)" : "") << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* col = colors[si % 6];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"8,5\"" : "")
       << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (logx && s.x[i] <= 0) || (logy && s.y[i] <= 0)) continue;
      os << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (logx && s.x[i] <= 0) || (logy && s.y[i] <= 0)) continue;
      os << "<circle cx=\"" << X(s.x[i]) << "\" cy=\"" << Y(s.y[i]) << "\" r=\"3.5\" fill=\"" << col << "\"/>\n";
    }
    const double ly = T + 20 + 24 * si;
    os << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 45 << "\" y2=\"" << ly << "\" stroke=\"" << col
       << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"8,5\"" : "") << "/>\n";
    os << "<text x=\"" << W - R + 52 << "\" y=\"" << ly + 5 << "\" font-family=\"sans-serif\" font-size=\"14\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_report(const SweepReport& rep, const std::string& dir, const std::string& basename) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path base = std::filesystem::path(dir) / basename;
  {
    std::ofstream out(base.string() + ".csv");
    if (!out) throw Error(ErrorKind::io, "cannot write " + base.string() + ".csv");
    out << report_csv(rep);
    if (!out) throw Error(ErrorKind::io, "write failed for " + base.string() + ".csv");
  }
  if (rep.records.empty()) return;

  std::vector<PlotSeries> series;
  std::string svg;
  if (rep.axis == SweepReport::Axis::beta) {
    for (int j = 1; j <= rep.n; ++j) {
      PlotSeries s;
      s.label = "e_" + std::to_string(j);
      for (const auto& r : rep.records)
        if (r.j == j) s.x.push_back(r.param), s.y.push_back(r.err);
      series.push_back(std::move(s));
    }
    if (rep.fit.fitted) {
      PlotSeries env;
      env.label = "C ln(b)/b";
      env.dashed = true;
      for (double b : rep.axis_values) env.x.push_back(b), env.y.push_back(rep.fit.C * std::log(b) / b);
      series.push_back(std::move(env));
    }
    svg = svg_plot("error vs beta (c0 = " + num(rep.fixed) + ")", "beta", "|lambda + beta^2/4 - mu|", series, true, true);
  } else {
    for (int j = 1; j <= rep.n; ++j) {
      PlotSeries s;
      s.label = "lambda_" + std::to_string(j) + " mid";
      for (const auto& r : rep.records)
        if (r.j == j) s.x.push_back(r.param), s.y.push_back(r.lambda_mid);
      series.push_back(std::move(s));
    }
    svg = svg_plot("dispersion (beta = " + num(rep.fixed) + ")", "c0", "lambda", series, false, false);
  }
  std::ofstream out(base.string() + ".svg");
  if (!out) throw Error(ErrorKind::io, "cannot write " + base.string() + ".svg");
  out << svg;
}

}  // namespace abloop

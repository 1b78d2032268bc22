#include "hamzoo/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace hamzoo {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_cell(std::string_view cell, std::size_t line) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error("bad number '" + std::string(cell) + "' on line " +
                             std::to_string(line));
  }
  return v;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const Potential& pot,
                          std::ostream& out) {
  out << "t,x,p,H\n";
  for (const Sample& s : traj.samples) {
    const double h = eval_h(traj.spec, traj.params, pot, {s.x, s.p});
    out << fmt17(s.t) << ',' << fmt17(s.x) << ',' << fmt17(s.p) << ','
        << fmt17(h) << '\n';
  }
}

std::vector<CsvRow> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,x,p,H") {
    throw std::runtime_error("expected header t,x,p,H");
  }
  std::vector<CsvRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    double cells[4];
    std::size_t start = 0;
    for (int i = 0; i < 4; ++i) {
      const std::size_t comma = line.find(',', start);
      if ((i < 3) == (comma == std::string::npos)) {
        throw std::runtime_error("expected 4 fields on line " + std::to_string(n));
      }
      const std::size_t stop = i < 3 ? comma : line.size();
      cells[i] = parse_cell(std::string_view(line).substr(start, stop - start), n);
      start = stop + 1;
    }
    rows.push_back({cells[0], cells[1], cells[2], cells[3]});
  }
  return rows;
}

void write_legendre_csv(const std::vector<LegendreGridRow>& rows,
                        std::ostream& out) {
  out << "x,v,Lj,pj,legendre_residual\n";
  for (const auto& r : rows) {
    out << fmt17(r.x) << ',' << fmt17(r.v) << ',' << fmt17(r.lagrangian) << ','
        << fmt17(r.momentum) << ',' << fmt17(r.residual) << '\n';
  }
}

PhaseCurve phase_curve(const Trajectory& traj, const std::string& label) {
  PhaseCurve c;
  c.label = label;
  c.x.reserve(traj.samples.size());
  c.p.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) {
    c.x.push_back(s.x);
    c.p.push_back(s.p);
  }
  return c;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// 1-2-5 step giving roughly `target` intervals over the span.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double w = std::max(1.0, std::fabs(lo));
    return {lo - 0.5 * w, hi + 0.5 * w};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string phase_portrait_svg(const std::vector<PhaseCurve>& curves,
                               const std::string& title) {
  double xlo = INFINITY, xhi = -INFINITY, plo = INFINITY, phi = -INFINITY;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.x.size() && i < c.p.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.p[i])) continue;
      xlo = std::min(xlo, c.x[i]);
      xhi = std::max(xhi, c.x[i]);
      plo = std::min(plo, c.p[i]);
      phi = std::max(phi, c.p[i]);
    }
  }
  if (!std::isfinite(xlo)) xlo = xhi = plo = phi = 0.0;
  const Range xr = padded(xlo, xhi);
  const Range pr = padded(plo, phi);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double p) {
    return kTop + plot_h - (p - pr.lo) / (pr.hi - pr.lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "width=\"800\" height=\"600\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(title) << "</text>\n";
  svg << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
      << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = tick_step(xr.hi - xr.lo, 8);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi; t += xs) {
    const double px = sx(t);
    const double tick = std::fabs(t) < 1e-12 * xs ? 0.0 : t;
    svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kTop + plot_h)
        << "\" x2=\"" << fmt(px) << "\" y2=\"" << fmt(kTop + plot_h + 6)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kTop + plot_h + 20)
        << "\" text-anchor=\"middle\">" << fmt(tick, "%g") << "</text>\n";
  }
  const double ps = tick_step(pr.hi - pr.lo, 6);
  for (double t = std::ceil(pr.lo / ps) * ps; t <= pr.hi; t += ps) {
    const double py = sy(t);
    const double tick = std::fabs(t) < 1e-12 * ps ? 0.0 : t;
    svg << "<line x1=\"" << fmt(kLeft - 6) << "\" y1=\"" << fmt(py)
        << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(py)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(kLeft - 10) << "\" y=\"" << fmt(py + 4)
        << "\" text-anchor=\"end\">" << fmt(tick, "%g") << "</text>\n";
  }
  // zero axes when they fall inside the frame
  if (xr.lo < 0.0 && xr.hi > 0.0) {
    svg << "<line x1=\"" << fmt(sx(0)) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
        << fmt(sx(0)) << "\" y2=\"" << fmt(kTop + plot_h)
        << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
  }
  if (pr.lo < 0.0 && pr.hi > 0.0) {
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(sy(0)) << "\" x2=\""
        << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(sy(0))
        << "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
  }
  svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 15)
      << "\" text-anchor=\"middle\">x</text>\n";
  svg << "<text x=\"20\" y=\"" << fmt(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << fmt(kTop + plot_h / 2) << ")\">p</text>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const char* color = kColors[k % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < c.x.size() && i < c.p.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.p[i])) continue;
      if (!first) svg << ' ';
      svg << fmt(sx(c.x[i])) << ',' << fmt(sy(c.p[i]));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(k);
    svg << "<line x1=\"" << fmt(kLeft + plot_w - 150) << "\" y1=\"" << fmt(ly - 4)
        << "\" x2=\"" << fmt(kLeft + plot_w - 130) << "\" y2=\"" << fmt(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt(kLeft + plot_w - 124) << "\" y=\"" << fmt(ly)
        << "\">" << escape(c.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_mask_pgm(const std::vector<std::vector<std::uint8_t>>& mask,
                    std::ostream& out) {
  std::size_t width = 0;
  for (const auto& row : mask) width = std::max(width, row.size());
  out << "P5\n" << width << ' ' << mask.size() << "\n1\n";
  std::string line(width, '\1');
  for (const auto& row : mask) {
    std::fill(line.begin(), line.end(), '\1');
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i]) line[i] = '\0';
    }
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

}  // namespace hamzoo

#include "sarsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sarsim/errors.hpp"

namespace sarsim {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kCloudColors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f"};

// World metres -> SVG pixels, y up.
struct View {
  Vec2 lo;
  Vec2 hi;
  double scale = 1.0;
  double pad = 20.0;
  double legend_h = 70.0;

  double px(double x) const { return pad + (x - lo.x) * scale; }
  double py(double y) const { return pad + legend_h + (hi.y - y) * scale; }
  double width() const { return 2 * pad + (hi.x - lo.x) * scale; }
  double height() const { return 2 * pad + legend_h + (hi.y - lo.y) * scale; }
};

// Light yellow (old) to dark red (recent).
std::string recency_color(double f) {
  const double r = 255 + (139 - 255) * f;
  const double g = 237 + (0 - 237) * f;
  const double b = 160 + (0 - 160) * f;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r), static_cast<int>(g), static_cast<int>(b));
  return buf;
}

}  // namespace

std::string trajectory_svg(const SimConfig& cfg, const RunRecord& record, std::span<const ParticleEnsemble> ensembles,
                           std::span<const TruthTarget> truths, const TrajectoryPlotOptions& opt) {
  const GridWorld& g = cfg.grid;
  const double cs = g.cell_size();

  Vec2 lo = cfg.takeoff;
  Vec2 hi = cfg.takeoff;
  auto grow = [&](Vec2 p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  for (const auto& t : record.trace) grow(g.center_of(t.uav));
  std::vector<std::vector<Vec2>> clouds;
  for (const auto& e : ensembles) {
    std::vector<Vec2> pts;
    const std::size_t stride = std::max<std::size_t>(1, e.alive_count() / std::max<std::size_t>(1, opt.max_particles));
    std::size_t seen = 0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (!e.alive(k)) continue;
      if (seen++ % stride == 0) {
        pts.push_back(e.positions()[k]);
        grow(pts.back());
      }
    }
    clouds.push_back(std::move(pts));
  }
  for (const auto& t : truths) grow(t.position);
  const double m = std::max(opt.margin_m, 5 * cs);
  lo = lo - Vec2{m, m};
  hi = hi + Vec2{m, m};
  // Snap the view to whole cells so the grid lines land on cell edges.
  lo = {g.origin().x + std::floor((lo.x - g.origin().x) / cs) * cs, g.origin().y + std::floor((lo.y - g.origin().y) / cs) * cs};
  hi = {g.origin().x + std::ceil((hi.x - g.origin().x) / cs) * cs, g.origin().y + std::ceil((hi.y - g.origin().y) / cs) * cs};

  View v{lo, hi};
  v.scale = opt.width_px / std::max(hi.x - lo.x, hi.y - lo.y);

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << v.width() << "\" height=\"" << v.height()
     << "\" viewBox=\"0 0 " << v.width() << ' ' << v.height() << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << v.width() << "\" height=\"" << v.height() << "\" fill=\"#f4f8fb\"/>\n";

  // Grid: every cell when zoomed in, otherwise every kilometre-ish.
  const double cells_across = (hi.x - lo.x) / cs;
  const double step = cells_across <= 120 ? cs : cs * std::ceil(cells_across / 100.0);
  os << "<g id=\"grid\" stroke=\"#d5dde5\" stroke-width=\"0.5\">\n";
  for (double x = lo.x; x <= hi.x + 1e-6; x += step)
    os << "<line x1=\"" << v.px(x) << "\" y1=\"" << v.py(lo.y) << "\" x2=\"" << v.px(x) << "\" y2=\"" << v.py(hi.y)
       << "\"/>\n";
  for (double y = lo.y; y <= hi.y + 1e-6; y += step)
    os << "<line x1=\"" << v.px(lo.x) << "\" y1=\"" << v.py(y) << "\" x2=\"" << v.px(hi.x) << "\" y2=\"" << v.py(y)
       << "\"/>\n";
  os << "</g>\n";

  // Visited cells, most recent visit wins.
  if (!record.trace.empty()) {
    std::vector<std::pair<Cell, std::size_t>> last;
    last.reserve(record.trace.size());
    for (std::size_t k = 0; k < record.trace.size(); ++k) last.emplace_back(record.trace[k].uav, k);
    std::stable_sort(last.begin(), last.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    os << "<g id=\"visited\">\n";
    const double n = static_cast<double>(record.trace.size());
    for (std::size_t k = 0; k < last.size(); ++k) {
      if (k + 1 < last.size() && last[k + 1].first == last[k].first) continue;
      const Vec2 c = g.center_of(last[k].first);
      const double f = n > 1 ? static_cast<double>(last[k].second) / (n - 1) : 1.0;
      os << "<rect x=\"" << v.px(c.x - cs / 2) << "\" y=\"" << v.py(c.y + cs / 2) << "\" width=\"" << cs * v.scale
         << "\" height=\"" << cs * v.scale << "\" fill=\"" << recency_color(f) << "\"/>\n";
    }
    os << "</g>\n";
  }

  for (std::size_t e = 0; e < clouds.size(); ++e) {
    os << "<g id=\"particles-" << e << "\" fill=\"" << kCloudColors[e % 8] << "\" fill-opacity=\"0.5\">\n";
    for (const Vec2& p : clouds[e]) os << "<circle cx=\"" << v.px(p.x) << "\" cy=\"" << v.py(p.y) << "\" r=\"1.2\"/>\n";
    os << "</g>\n";
  }

  os << "<polyline id=\"trajectory\" fill=\"none\" stroke=\"#222\" stroke-width=\"1\" points=\"";
  os << v.px(cfg.takeoff.x) << ',' << v.py(cfg.takeoff.y);
  for (const auto& t : record.trace) {
    const Vec2 c = g.center_of(t.uav);
    os << ' ' << v.px(c.x) << ',' << v.py(c.y);
  }
  os << "\"/>\n";

  os << "<rect id=\"takeoff\" x=\"" << v.px(cfg.takeoff.x) - 4 << "\" y=\"" << v.py(cfg.takeoff.y) - 4
     << "\" width=\"8\" height=\"8\" fill=\"#333\"/>\n";
  for (std::size_t k = 0; k < truths.size(); ++k) {
    const bool found = truths[k].found_at.has_value();
    os << "<circle class=\"target\" cx=\"" << v.px(truths[k].position.x) << "\" cy=\"" << v.py(truths[k].position.y)
       << "\" r=\"5\" fill=\"" << (found ? "#2ca02c" : "none") << "\" stroke=\"#000\"/>\n";
  }

  // Legend.
  const Vec2 uav = record.trace.empty() ? cfg.takeoff : g.center_of(record.trace.back().uav);
  const double t = record.trace.empty() ? 0.0 : record.trace.back().time;
  int found = 0;
  for (const auto& o : record.outcomes) found += o.found;
  std::ostringstream l1;
  l1.setf(std::ios::fixed);
  l1.precision(2);
  l1 << "UAV (" << uav.x / 1000.0 << ", " << uav.y / 1000.0 << ") km   t = " << t / 60.0 << " min";
  std::ostringstream l2;
  l2 << "found " << found << '/' << cfg.targets.size() << " targets   erased particles " << record.erased_particles
     << "   planner " << record.planner;
  os << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#111\">\n";
  os << "<text x=\"" << v.pad << "\" y=\"" << v.pad + 14 << "\">" << escape(l1.str()) << "</text>\n";
  os << "<text x=\"" << v.pad << "\" y=\"" << v.pad + 34 << "\">" << escape(l2.str()) << "</text>\n";
  os << "<text x=\"" << v.pad << "\" y=\"" << v.pad + 54 << "\" fill=\"#8b0000\">dark red = recently visited</text>\n";
  os << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

std::string metrics_svg(const MetricsTable& table) {
  const double bar = 18.0;
  const double group = 3 * bar + 30;
  const double left = 60;
  const double top = 50;
  const double plot_h = 240;
  const double width = left + group * std::max<std::size_t>(1, table.rows.size()) + 20;
  const double height = top + plot_h + 60;

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
     << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#fff\"/>\n";
  os << "<text x=\"" << left << "\" y=\"22\" font-size=\"14\">Targets ~" << table.distance_km
     << " km off shore</text>\n";
  os << "<rect x=\"" << width - 190 << "\" y=\"12\" width=\"10\" height=\"10\" fill=\"#1f77b4\"/><text x=\""
     << width - 175 << "\" y=\"21\">success rate</text>\n";
  os << "<rect x=\"" << width - 190 << "\" y=\"28\" width=\"10\" height=\"10\" fill=\"#ff7f0e\"/><text x=\""
     << width - 175 << "\" y=\"37\">success rate 1st</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = top + plot_h - plot_h * k / 4.0;
    os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - 10 << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << k / 4.0 << "</text>\n";
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const double x = left + 15 + group * i;
    const double h1 = plot_h * std::clamp(r.success_rate, 0.0, 1.0);
    const double h2 = plot_h * std::clamp(r.success_rate_first, 0.0, 1.0);
    os << "<rect x=\"" << x << "\" y=\"" << top + plot_h - h1 << "\" width=\"" << bar << "\" height=\"" << h1
       << "\" fill=\"#1f77b4\"/>\n";
    os << "<rect x=\"" << x + bar << "\" y=\"" << top + plot_h - h2 << "\" width=\"" << bar << "\" height=\"" << h2
       << "\" fill=\"#ff7f0e\"/>\n";
    os << "<text x=\"" << x + bar << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">"
       << escape(r.planner) << "</text>\n";
    if (r.time_first_min)
      os << "<text x=\"" << x + bar << "\" y=\"" << top + plot_h + 32 << "\" text-anchor=\"middle\" fill=\"#555\">"
         << *r.time_first_min << " min</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << content;
  os.close();
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace sarsim

#include "nambu/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace nambu {

namespace {

std::string fmt(const char* f, double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int rate_power(const std::string& id) { return theorem_info(id).rate == RateClass::inv_k ? 1 : 2; }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f"};

}  // namespace

std::string residual_csv(const std::vector<ResidualSeries>& series) {
  std::string out = "theorem_id,geometry,r,seed,k,residual,scaled_residual,slope,r2,converged\n";
  for (const auto& s : series) {
    const int p = rate_power(s.theorem_id);
    const double slope = s.fitted ? s.fit.slope : std::numeric_limits<double>::quiet_NaN();
    const double r2 = s.fitted ? s.fit.r2 : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < s.ks.size(); ++i) {
      const auto& v = s.values[i];
      out += s.theorem_id + "," + s.geometry + "," + std::to_string(s.r) + "," + std::to_string(s.seed) + "," +
             std::to_string(s.ks[i]) + "," + fmt("%.10e", v.residual) + "," +
             fmt("%.10e", std::pow(double(s.ks[i]), p) * v.residual) + "," + fmt("%.6f", slope) + "," +
             fmt("%.6f", r2) + "," + (v.converged ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::vector<ResidualSeries> read_residual_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("theorem_id,geometry,r,seed,k,residual", 0) != 0)
    throw Error("not a residual CSV (bad header)");
  std::vector<ResidualSeries> series;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 10) throw Error("residual CSV row " + std::to_string(row) + ": expected 10 columns");
    try {
      theorem_info(c[0]);
      const int r = std::stoi(c[2]);
      const auto seed = std::stoull(c[3]);
      if (series.empty() || series.back().theorem_id != c[0] || series.back().geometry != c[1] ||
          series.back().r != r || series.back().seed != seed) {
        ResidualSeries s;
        s.theorem_id = c[0];
        s.geometry = c[1];
        s.r = r;
        s.seed = seed;
        series.push_back(std::move(s));
      }
      Evaluation e;
      e.residual = std::stod(c[5]);
      e.converged = c[9] == "1";
      series.back().ks.push_back(std::stoi(c[4]));
      series.back().values.push_back(e);
    } catch (const std::logic_error& e) {
      throw Error("residual CSV row " + std::to_string(row) + ": " + e.what());
    }
  }
  for (auto& s : series) finalize_series(s, theorem_info(s.theorem_id));
  return series;
}

std::string rate_svg(const std::string& theorem_id, const std::vector<ResidualSeries>& all) {
  std::vector<const ResidualSeries*> series;
  for (const auto& s : all)
    if (s.theorem_id == theorem_id) series.push_back(&s);

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto* s : series)
    for (std::size_t i = 0; i < s->ks.size(); ++i) {
      if (s->values[i].residual < kZeroResidual) continue;
      const double x = std::log10(s->ks[i]), y = std::log10(s->values[i].residual);
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  const bool empty = x0 > x1;
  if (empty) x0 = 0, x1 = 1, y0 = -1, y1 = 0;
  if (x1 - x0 < 1e-9) x0 -= 0.1, x1 += 0.1;
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.05 * (x1 - x0), pady = 0.08 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;

  const double W = 640, H = 420, L = 70, R = 190, T = 40, B = 50;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" "
    << "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << L << "\" y=\"22\" font-size=\"14\">" << theorem_id << ": log10 residual vs log10 k</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  // ticks at the sampled ks and at integer decades of the residual
  std::vector<int> ks;
  for (const auto* s : series) ks.insert(ks.end(), s->ks.begin(), s->ks.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (int k : ks) {
    const double x = px(std::log10(k));
    if (x < L || x > W - R) continue;
    o << "<line x1=\"" << x << "\" y1=\"" << H - B << "\" x2=\"" << x << "\" y2=\"" << H - B + 5 << "\" stroke=\"black\"/>"
      << "<text x=\"" << x << "\" y=\"" << H - B + 17 << "\" text-anchor=\"middle\">" << k << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y0)); d <= std::floor(y1); ++d)
    o << "<line x1=\"" << L - 5 << "\" y1=\"" << py(d) << "\" x2=\"" << L << "\" y2=\"" << py(d) << "\" stroke=\"black\"/>"
      << "<text x=\"" << L - 8 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">k</text>\n";

  const double thr = slope_threshold(theorem_info(theorem_id).rate);
  for (std::size_t j = 0; j < series.size(); ++j) {
    const auto& s = *series[j];
    const char* col = kPalette[j % std::size(kPalette)];
    for (std::size_t i = 0; i < s.ks.size(); ++i) {
      if (s.values[i].residual < kZeroResidual) continue;
      o << "<circle cx=\"" << px(std::log10(s.ks[i])) << "\" cy=\"" << py(std::log10(s.values[i].residual))
        << "\" r=\"3.5\" fill=\"" << col << "\"/>\n";
    }
    std::string label = "r=" + std::to_string(s.r) + " seed " + std::to_string(s.seed);
    if (s.fitted) {
      const auto& ex = s.fit.excluded_ks;
      std::vector<double> fx;
      for (int k : s.ks)
        if (std::find(ex.begin(), ex.end(), k) == ex.end()) fx.push_back(std::log10(k));
      const double a = *std::min_element(fx.begin(), fx.end()), b = *std::max_element(fx.begin(), fx.end());
      auto line_y = [&](double x) { return s.fit.intercept / std::log(10.0) + s.fit.slope * x; };
      o << "<line x1=\"" << px(a) << "\" y1=\"" << py(line_y(a)) << "\" x2=\"" << px(b) << "\" y2=\"" << py(line_y(b))
        << "\" stroke=\"" << col << "\" stroke-width=\"1.5\"/>\n";
      // threshold slope through the fitted value at the left end
      o << "<line x1=\"" << px(a) << "\" y1=\"" << py(line_y(a)) << "\" x2=\"" << px(b) << "\" y2=\""
        << py(line_y(a) + thr * (b - a)) << "\" stroke=\"" << col << "\" stroke-dasharray=\"4 3\" opacity=\"0.6\"/>\n";
      char buf[64];
      std::snprintf(buf, sizeof buf, " slope %.2f %s", s.fit.slope, s.pass ? "ok" : "FAIL");
      label += buf;
    } else {
      label += s.all_zero ? " zero" : " no fit";
    }
    const double ly = T + 14 + 16.0 * j;
    o << "<circle cx=\"" << W - R + 12 << "\" cy=\"" << ly - 4 << "\" r=\"3.5\" fill=\"" << col << "\"/>"
      << "<text x=\"" << W - R + 20 << "\" y=\"" << ly << "\">" << label << "</text>\n";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "dashed: slope %.1f", thr);
  o << "<text x=\"" << W - R + 12 << "\" y=\"" << H - B << "\">" << buf << "</text>\n";
  if (empty) o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H / 2 << "\" text-anchor=\"middle\">all residuals zero</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::string summary_table(const std::vector<ResidualSeries>& series) {
  std::string out;
  char line[512];
  for (const auto& s : series) {
    const TheoremInfo& info = theorem_info(s.theorem_id);
    std::string fit = "      -", r2 = "     -";
    if (s.fitted) fit = fmt("%+7.3f", s.fit.slope), r2 = fmt("%6.4f", s.fit.r2);
    std::snprintf(line, sizeof line, "%-4s %-20s %-6s r=%d seed=%-4llu slope %s (need <= %.1f) R2 %s  max k^p r %.3e%s%s\n",
                  s.pass ? "ok" : "FAIL", s.theorem_id.c_str(), s.geometry.c_str(), s.r,
                  static_cast<unsigned long long>(s.seed), fit.c_str(), slope_threshold(info.rate), r2.c_str(),
                  s.max_scaled, s.note.empty() ? "" : "  ", s.note.c_str());
    out += line;
  }
  return out;
}

std::vector<std::string> write_reports(const std::string& dir, const std::vector<ResidualSeries>& series) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> paths;
  auto put = [&](const std::string& name, const std::string& body) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << body;
    paths.push_back(path);
  };
  put("residuals.csv", residual_csv(series));
  put("summary.txt", summary_table(series));
  std::vector<std::string> ids;
  for (const auto& s : series)
    if (std::find(ids.begin(), ids.end(), s.theorem_id) == ids.end()) ids.push_back(s.theorem_id);
  for (const auto& id : ids) put(id + ".svg", rate_svg(id, series));
  return paths;
}

}  // namespace nambu

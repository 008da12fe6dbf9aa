#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "escape_lab/analytic.hpp"
#include "escape_lab/errors.hpp"

namespace escape_lab::cli {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 170;
constexpr double kTop = 30;
constexpr double kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Series {
  std::string label;
  std::string colour;
  bool dashed = false;
  std::vector<std::pair<double, double>> points;
};

struct Whisker {
  double x, low, high;
};

double parse_cell(const std::string& s, const std::string& column) {
  if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("column '" + column + "' holds non-numeric value '" + s + "'");
}

std::vector<double> numeric_column(const CsvTable& t, const std::string& name) {
  const auto idx = static_cast<std::size_t>(t.column(name));
  std::vector<double> out;
  for (const auto& row : t.rows) out.push_back(parse_cell(row[idx], name));
  return out;
}

void require_columns(const CsvTable& t, const std::vector<std::string>& required) {
  const auto missing = t.missing_columns(required);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError("CSV is missing required columns: " + list);
  }
  if (t.rows.empty()) throw ConfigError("CSV has no data rows to plot");
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

class Canvas {
 public:
  Canvas(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    if (x1_ <= x0_) x1_ = x0_ + 1.0;
    if (y1_ <= y0_) y1_ = y0_ + 1.0;
  }

  double sx(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double sy(double y) const { return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom); }

  std::string frame(const std::string& xlabel, const std::string& ylabel, const std::string& title) const {
    std::ostringstream os;
    const double right = kWidth - kRight;
    const double bottom = kHeight - kBottom;
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << right - kLeft << "\" height=\""
       << bottom - kTop << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double xv = x0_ + (x1_ - x0_) * i / 5.0;
      const double yv = y0_ + (y1_ - y0_) * i / 5.0;
      os << "<line x1=\"" << sx(xv) << "\" y1=\"" << bottom << "\" x2=\"" << sx(xv) << "\" y2=\"" << bottom + 5
         << "\" stroke=\"#444\"/>\n";
      os << "<text x=\"" << sx(xv) << "\" y=\"" << bottom + 20 << "\" text-anchor=\"middle\">" << num(xv)
         << "</text>\n";
      os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << kLeft << "\" y2=\"" << sy(yv)
         << "\" stroke=\"#444\"/>\n";
      os << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << num(yv)
         << "</text>\n";
    }
    os << "<text x=\"" << (kLeft + right) / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << xlabel
       << "</text>\n";
    os << "<text x=\"18\" y=\"" << (kTop + bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << (kTop + bottom) / 2 << ")\">" << ylabel << "</text>\n";
    os << "<text x=\"" << (kLeft + right) / 2 << "\" y=\"20\" text-anchor=\"middle\" font-weight=\"bold\">" << title
       << "</text>\n";
    return os.str();
  }

  std::string polyline(const Series& s) const {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"2\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " points=\"";
    for (const auto& [x, y] : s.points) os << sx(x) << ',' << sy(y) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : s.points) {
      os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << s.colour << "\"/>\n";
    }
    return os.str();
  }

 private:
  double x0_, x1_, y0_, y1_;
};

std::string legend(const std::vector<Series>& series, const std::vector<std::string>& extra) {
  std::ostringstream os;
  double y = kTop + 10;
  const double x = kWidth - kRight + 15;
  for (const auto& s : series) {
    os << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 25 << "\" y2=\"" << y << "\" stroke=\""
       << s.colour << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    os << "<text x=\"" << x + 30 << "\" y=\"" << y + 4 << "\">" << s.label << "</text>\n";
    y += 20;
  }
  for (const auto& e : extra) {
    os << e;
  }
  return os.str();
}

std::string document(const std::string& body) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << body << "</svg>\n";
  return os.str();
}

std::string survival_plot(const CsvTable& t, int d) {
  require_columns(t, {"lambda", "survival_freq", "ci_low", "ci_high"});
  const auto lambda = numeric_column(t, "lambda");
  const auto freq = numeric_column(t, "survival_freq");
  const auto lo = numeric_column(t, "ci_low");
  const auto hi = numeric_column(t, "ci_high");
  const double critical = lambda_critical(d);

  Series s{"survival frequency", kPalette[0], false, {}};
  std::vector<Whisker> whiskers;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    s.points.emplace_back(lambda[i], freq[i]);
    whiskers.push_back({lambda[i], lo[i], hi[i]});
  }
  std::sort(s.points.begin(), s.points.end());
  const double xmin = std::min(*std::min_element(lambda.begin(), lambda.end()), critical);
  const double xmax = std::max(*std::max_element(lambda.begin(), lambda.end()), critical);
  const double pad = 0.05 * (xmax - xmin);
  Canvas canvas(xmin - pad, xmax + pad, 0.0, 1.0);

  std::ostringstream body;
  body << canvas.frame("lambda", "survival frequency", "Survival at budget, d = " + std::to_string(d));
  for (const auto& w : whiskers) {
    body << "<line x1=\"" << canvas.sx(w.x) << "\" y1=\"" << canvas.sy(w.low) << "\" x2=\"" << canvas.sx(w.x)
         << "\" y2=\"" << canvas.sy(w.high) << "\" stroke=\"" << kPalette[0] << "\" stroke-opacity=\"0.5\"/>\n";
  }
  body << canvas.polyline(s);
  body << "<line id=\"critical-marker\" x1=\"" << canvas.sx(critical) << "\" y1=\"" << canvas.sy(0.0) << "\" x2=\""
       << canvas.sx(critical) << "\" y2=\"" << canvas.sy(1.0) << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
  std::ostringstream marker_legend;
  const double y = kTop + 30;
  const double x = kWidth - kRight + 15;
  marker_legend << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 25 << "\" y2=\"" << y
                << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n"
                << "<text x=\"" << x + 30 << "\" y=\"" << y + 4 << "\">critical " << num(critical) << "</text>\n";
  body << legend({s}, {marker_legend.str()});
  return document(body.str());
}

std::string profile_plot(const CsvTable& t) {
  require_columns(t, {"c", "n", "empirical_exponent", "analytic_exponent"});
  const auto c = numeric_column(t, "c");
  const auto n = numeric_column(t, "n");
  const auto emp = numeric_column(t, "empirical_exponent");
  const auto ana = numeric_column(t, "analytic_exponent");

  std::map<double, std::pair<Series, Series>> by_c;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto& [e, a] = by_c[c[i]];
    xmin = std::min(xmin, n[i]);
    xmax = std::max(xmax, n[i]);
    if (std::isfinite(emp[i])) {
      e.points.emplace_back(n[i], emp[i]);
      ymin = std::min(ymin, emp[i]);
      ymax = std::max(ymax, emp[i]);
    }
    if (std::isfinite(ana[i])) {
      a.points.emplace_back(n[i], ana[i]);
      ymin = std::min(ymin, ana[i]);
      ymax = std::max(ymax, ana[i]);
    }
  }
  if (!std::isfinite(ymin)) throw ConfigError("profile CSV has no finite exponents to plot");
  const double pad = 0.1 * std::max(ymax - ymin, 0.1);
  Canvas canvas(xmin, xmax, ymin - pad, ymax + pad);

  std::vector<Series> all;
  std::size_t k = 0;
  for (auto& [cv, pair] : by_c) {
    const char* colour = kPalette[k++ % std::size(kPalette)];
    pair.first.label = "empirical, c=" + num(cv);
    pair.first.colour = colour;
    pair.second.label = "-g(c), c=" + num(cv);
    pair.second.colour = colour;
    pair.second.dashed = true;
    std::sort(pair.first.points.begin(), pair.first.points.end());
    std::sort(pair.second.points.begin(), pair.second.points.end());
    all.push_back(pair.first);
    all.push_back(pair.second);
  }
  std::ostringstream body;
  body << canvas.frame("n", "(1/n) log mean M_n(n/c)", "Growth profile exponent");
  for (const auto& s : all) body << canvas.polyline(s);
  body << legend(all, {});
  return document(body.str());
}

}  // namespace

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "survival") return PlotKind::Survival;
  if (name == "profile") return PlotKind::Profile;
  throw ConfigError("plot kind must be 'survival' or 'profile', got '" + name + "'");
}

std::string render_plot(const CsvTable& table, PlotKind kind, int d) {
  return kind == PlotKind::Survival ? survival_plot(table, d) : profile_plot(table);
}

void emit_plot(const std::filesystem::path& csv_path, PlotKind kind, int d, const std::filesystem::path& out_path) {
  write_file_atomic(out_path, render_plot(read_csv(csv_path), kind, d));
}

}  // namespace escape_lab::cli

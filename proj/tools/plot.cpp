#include "plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace fedstrat::cli {
namespace {

constexpr double kWidth = 800, kHeight = 480;
constexpr double kLeft = 70, kRight = 170, kTop = 50, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

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

void open_svg(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(title) << "</text>\n";
}

}  // namespace

std::string accuracy_svg(const std::string& title, const std::vector<Series>& series) {
  std::ostringstream os;
  open_svg(os, title);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  std::size_t rounds = 1;
  for (const auto& s : series) rounds = std::max(rounds, s.y.size());
  const double xmax = static_cast<double>(std::max<std::size_t>(rounds - 1, 1));
  auto px = [&](double x) { return kLeft + pw * x / xmax; };
  auto py = [&](double y) { return kTop + ph * (1.0 - std::clamp(y, 0.0, 1.0)); };

  for (int t = 0; t <= 10; t += 2) {
    const double y = t / 10.0;
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << num(py(y))
       << "\" y2=\"" << num(py(y)) << "\" stroke=\"#ddd\"/>\n"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(y) + 4)
       << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  const std::size_t xstep = std::max<std::size_t>(1, rounds / 10);
  for (std::size_t r = 0; r < rounds; r += xstep)
    os << "<text x=\"" << num(px(static_cast<double>(r))) << "\" y=\"" << kTop + ph + 18
       << "\" text-anchor=\"middle\">" << r << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\">Round</text>\n"
     << "<text transform=\"translate(20," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">Test accuracy</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t r = 0; r < series[i].y.size(); ++r)
      os << num(px(static_cast<double>(r))) << ',' << num(py(series[i].y[r])) << ' ';
    os << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
    os << "<line x1=\"" << kLeft + pw + 12 << "\" x2=\"" << kLeft + pw + 36 << "\" y1=\"" << ly
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">"
       << escape(series[i].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string selection_svg(const std::string& title, const std::array<double, 3>& pct) {
  static constexpr const char* kNames[] = {"FedAvg", "Median", "Krum"};
  std::ostringstream os;
  open_svg(os, title);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double slot = pw / 3.0, bar = slot * 0.6;
  for (int t = 0; t <= 100; t += 20) {
    const double y = kTop + ph * (1.0 - t / 100.0);
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << num(y)
       << "\" y2=\"" << num(y) << "\" stroke=\"#ddd\"/>\n"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << t
       << "%</text>\n";
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const double h = ph * std::clamp(pct[i], 0.0, 100.0) / 100.0;
    const double x = kLeft + slot * static_cast<double>(i) + (slot - bar) / 2;
    os << "<rect x=\"" << num(x) << "\" y=\"" << num(kTop + ph - h) << "\" width=\"" << num(bar)
       << "\" height=\"" << num(h) << "\" fill=\"" << kPalette[i] << "\"/>\n"
       << "<text x=\"" << num(x + bar / 2) << "\" y=\"" << num(kTop + ph - h - 6)
       << "\" text-anchor=\"middle\">" << num(pct[i]) << "%</text>\n"
       << "<text x=\"" << num(x + bar / 2) << "\" y=\"" << kTop + ph + 18
       << "\" text-anchor=\"middle\">" << kNames[i] << "</text>\n";
  }
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n</svg>\n";
  return os.str();
}

}  // namespace fedstrat::cli

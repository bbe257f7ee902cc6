// src/report.cc

// Copyright 2026  spklink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spklink/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "spklink/binary_io.h"
#include "spklink/common.h"

namespace spklink {

namespace {

constexpr std::string_view kCsvHeader =
    "threshold,der,speaker_impurity,cluster_impurity";

std::string Num(double v, const char *fmt = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

struct Panel {
  double x0, y0, width, height;  // pixel box of the plotting area
  double xmin, xmax, ymin, ymax;

  double X(double v) const {
    return x0 + (xmax > xmin ? (v - xmin) / (xmax - xmin) : 0.5) * width;
  }
  double Y(double v) const {
    return y0 + height -
           (ymax > ymin ? (v - ymin) / (ymax - ymin) : 0.5) * height;
  }
};

void DrawAxes(const Panel &p, const std::string &title,
              const std::string &ylabel, std::string *svg) {
  std::string &s = *svg;
  s += "  <rect x=\"" + Num(p.x0) + "\" y=\"" + Num(p.y0) + "\" width=\"" +
       Num(p.width) + "\" height=\"" + Num(p.height) +
       "\" fill=\"none\" stroke=\"#000\"/>\n";
  s += "  <text x=\"" + Num(p.x0 + p.width / 2) + "\" y=\"" + Num(p.y0 - 10) +
       "\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = p.xmin + (p.xmax - p.xmin) * i / 4.0;
    const double yv = p.ymin + (p.ymax - p.ymin) * i / 4.0;
    s += "  <text x=\"" + Num(p.X(xv)) + "\" y=\"" + Num(p.y0 + p.height + 16) +
         "\" text-anchor=\"middle\" font-size=\"10\">" + Num(xv, "%.4g") +
         "</text>\n";
    s += "  <text x=\"" + Num(p.x0 - 6) + "\" y=\"" + Num(p.Y(yv) + 3) +
         "\" text-anchor=\"end\" font-size=\"10\">" + Num(100.0 * yv, "%.3g") +
         "%</text>\n";
  }
  s += "  <text x=\"" + Num(p.x0 + p.width / 2) + "\" y=\"" +
       Num(p.y0 + p.height + 34) +
       "\" text-anchor=\"middle\" font-size=\"12\">threshold</text>\n";
  s += "  <text x=\"" + Num(p.x0 - 46) + "\" y=\"" + Num(p.y0 + p.height / 2) +
       "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " +
       Num(p.x0 - 46) + " " + Num(p.y0 + p.height / 2) + ")\">" + ylabel +
       "</text>\n";
}

void DrawCurve(const Panel &p, const std::vector<ImpurityPoint> &points,
               double ImpurityPoint::*field, const std::string &color,
               std::string *svg) {
  std::string pts;
  for (const ImpurityPoint &q : points) {
    if (!pts.empty()) pts += ' ';
    pts += Num(p.X(q.threshold), "%.2f") + "," + Num(p.Y(q.*field), "%.2f");
  }
  *svg += "  <polyline fill=\"none\" stroke=\"" + color +
          "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
}

void DrawLegend(double x, double y, const std::string &color,
                const std::string &label, bool dashed, std::string *svg) {
  *svg += "  <line x1=\"" + Num(x) + "\" y1=\"" + Num(y) + "\" x2=\"" +
          Num(x + 20) + "\" y2=\"" + Num(y) + "\" stroke=\"" + color +
          "\" stroke-width=\"2\"" +
          (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
  *svg += "  <text x=\"" + Num(x + 26) + "\" y=\"" + Num(y + 4) +
          "\" font-size=\"11\">" + label + "</text>\n";
}

}  // namespace

std::string EmitReportCsv(const std::vector<ImpurityPoint> &points) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ImpurityPoint &p : points) {
    out += Num(p.threshold) + "," + Num(p.der) + "," +
           Num(p.speaker_impurity) + "," + Num(p.cluster_impurity) + "\n";
  }
  return out;
}

std::vector<ImpurityPoint> ParseReportCsv(std::string_view text) {
  std::vector<ImpurityPoint> points;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kCsvHeader)
        throw DataError("report CSV: unexpected header '" + std::string(line) +
                        "'");
      continue;
    }
    if (line.empty()) continue;
    double values[4];
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      std::size_t comma = f < 3 ? line.find(',', start) : line.size();
      if (comma == std::string_view::npos)
        throw DataError("report CSV line " + std::to_string(line_no) +
                        ": expected 4 fields");
      std::string_view field = line.substr(start, comma - start);
      auto [ptr, ec] = std::from_chars(field.data(),
                                       field.data() + field.size(), values[f]);
      if (ec != std::errc() || ptr != field.data() + field.size())
        throw DataError("report CSV line " + std::to_string(line_no) +
                        ": bad number '" + std::string(field) + "'");
      start = comma + 1;
    }
    points.push_back({values[0], values[2], values[3], values[1]});
  }
  return points;
}

std::string RenderReportSvg(const std::vector<ImpurityPoint> &points,
                            std::optional<double> baseline_der) {
  if (points.empty()) throw DataError("nothing to plot");
  double tmin = points.front().threshold, tmax = points.back().threshold;
  double der_max = 0.0, imp_max = 0.0;
  for (const ImpurityPoint &p : points) {
    tmin = std::min(tmin, p.threshold);
    tmax = std::max(tmax, p.threshold);
    der_max = std::max(der_max, p.der);
    imp_max = std::max({imp_max, p.speaker_impurity, p.cluster_impurity});
  }
  if (baseline_der) der_max = std::max(der_max, *baseline_der);
  der_max = der_max > 0.0 ? der_max * 1.1 : 1.0;
  imp_max = imp_max > 0.0 ? imp_max * 1.1 : 1.0;

  const Panel der_panel{80, 40, 360, 280, tmin, tmax, 0.0, der_max};
  const Panel imp_panel{560, 40, 360, 280, tmin, tmax, 0.0, imp_max};

  std::string svg =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"960\" height=\"420\" viewBox=\"0 0 960 420\">\n"
      "  <rect width=\"960\" height=\"420\" fill=\"#fff\"/>\n";
  DrawAxes(der_panel, "DER", "DER", &svg);
  DrawCurve(der_panel, points, &ImpurityPoint::der, "#1f77b4", &svg);
  DrawLegend(100, 395, "#1f77b4", "linked DER", false, &svg);
  if (baseline_der) {
    const double y = der_panel.Y(*baseline_der);
    svg += "  <line x1=\"" + Num(der_panel.x0) + "\" y1=\"" + Num(y, "%.2f") +
           "\" x2=\"" + Num(der_panel.x0 + der_panel.width) + "\" y2=\"" +
           Num(y, "%.2f") +
           "\" stroke=\"#000\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
    DrawLegend(260, 395, "#000", "no linking", true, &svg);
  }
  DrawAxes(imp_panel, "Speaker and cluster impurities", "impurity", &svg);
  DrawCurve(imp_panel, points, &ImpurityPoint::speaker_impurity, "#d62728",
            &svg);
  DrawCurve(imp_panel, points, &ImpurityPoint::cluster_impurity, "#2ca02c",
            &svg);
  DrawLegend(580, 395, "#d62728", "speaker impurity", false, &svg);
  DrawLegend(740, 395, "#2ca02c", "cluster impurity", false, &svg);
  svg += "</svg>\n";
  return svg;
}

void WriteReport(const std::vector<ImpurityPoint> &points,
                 const std::string &prefix,
                 std::optional<double> baseline_der) {
  if (points.empty()) throw DataError("no sweep points to report");
  WriteFileBytes(prefix + ".csv", EmitReportCsv(points));
  WriteFileBytes(prefix + ".svg", RenderReportSvg(points, baseline_der));
}

}  // namespace spklink

#include "rarefan/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rarefan {

void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::vector<double>& x, const std::vector<double>& y, bool log_y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("write_svg_line_plot: bad series");
    const int W = 640, H = 400, ML = 70, MR = 20, MT = 40, MB = 50;

    std::vector<double> yv = y;
    bool logged = false;
    if (log_y) {
        logged = std::all_of(yv.begin(), yv.end(), [](double v) { return v > 0.0; });
        if (logged)
            for (double& v : yv) v = std::log10(v);
    }
    double xmin = x.front(), xmax = x.front(), ymin = yv.front(), ymax = yv.front();
    for (std::size_t i = 0; i < x.size(); ++i) {
        xmin = std::min(xmin, x[i]);
        xmax = std::max(xmax, x[i]);
        ymin = std::min(ymin, yv[i]);
        ymax = std::max(ymax, yv[i]);
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    auto px = [&](double v) { return ML + (v - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (v - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                 "viewBox=\"0 0 %d %d\">\n",
                 W, H, W, H);
    std::fprintf(f, "<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", W, H);
    std::fprintf(f, "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">%s%s"
                    "</text>\n",
                 ML, title.c_str(), logged ? " (log y)" : "");
    std::fprintf(f,
                 "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n"
                 "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                 ML, H - MB, W - MR, H - MB, ML, MT, ML, H - MB);
    for (int tick = 0; tick <= 4; ++tick) {
        const double tx = xmin + tick * (xmax - xmin) / 4.0;
        const double ty = ymin + tick * (ymax - ymin) / 4.0;
        std::fprintf(f,
                     "<text x=\"%.1f\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"middle\">%.4g</text>\n",
                     px(tx), H - MB + 18, tx);
        std::fprintf(f,
                     "<text x=\"%d\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"end\">%.4g</text>\n",
                     ML - 6, py(ty) + 4, logged ? std::pow(10.0, ty) : ty);
    }
    std::fputs("<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"", f);
    for (std::size_t i = 0; i < x.size(); ++i)
        std::fprintf(f, "%.2f,%.2f ", px(x[i]), py(yv[i]));
    std::fputs("\"/>\n</svg>\n", f);
    std::fclose(f);
}

} // namespace rarefan

#ifndef CATGAN_PLOT_HPP
#define CATGAN_PLOT_HPP

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace catgan {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal line chart writer for training curves. One series, optional
// vertical marker (used for the end-of-pretraining boundary).
inline void render_line_chart(const std::string& path, const std::string& title,
                              const std::string& x_label, const std::string& y_label,
                              const PlotSeries& series,
                              std::optional<double> vline = std::nullopt,
                              const std::string& vline_label = "") {
    if (series.x.empty() || series.x.size() != series.y.size())
        throw std::invalid_argument("plot: series must be non-empty and aligned");

    const int W = 900, H = 540;
    const int ml = 90, mr = 30, mt = 50, mb = 70;
    cv::Mat img(H, W, CV_8UC3, cv::Scalar(255, 255, 255));

    double xmin = *std::min_element(series.x.begin(), series.x.end());
    double xmax = *std::max_element(series.x.begin(), series.x.end());
    double ymin = *std::min_element(series.y.begin(), series.y.end());
    double ymax = *std::max_element(series.y.begin(), series.y.end());
    if (vline) {
        xmin = std::min(xmin, *vline);
        xmax = std::max(xmax, *vline);
    }
    if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) {
        return ml + static_cast<int>(std::lround((x - xmin) / (xmax - xmin) * (W - ml - mr)));
    };
    auto py = [&](double y) {
        return H - mb - static_cast<int>(std::lround((y - ymin) / (ymax - ymin) * (H - mt - mb)));
    };

    const cv::Scalar black(0, 0, 0), grey(200, 200, 200), blue(180, 90, 30), red(60, 60, 220);

    auto fmt = [](double v) {
        std::ostringstream os;
        os << std::setprecision(4) << v;
        return os.str();
    };

    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double xv = xmin + (xmax - xmin) * i / n_ticks;
        const double yv = ymin + (ymax - ymin) * i / n_ticks;
        cv::line(img, {px(xv), mt}, {px(xv), H - mb}, grey, 1);
        cv::line(img, {ml, py(yv)}, {W - mr, py(yv)}, grey, 1);
        cv::putText(img, fmt(xv), {px(xv) - 15, H - mb + 22}, cv::FONT_HERSHEY_SIMPLEX, 0.45, black, 1);
        cv::putText(img, fmt(yv), {6, py(yv) + 4}, cv::FONT_HERSHEY_SIMPLEX, 0.45, black, 1);
    }
    cv::rectangle(img, {ml, mt}, {W - mr, H - mb}, black, 1);

    if (vline) {
        const int x = px(*vline);
        for (int y = mt; y < H - mb; y += 12) cv::line(img, {x, y}, {x, std::min(y + 6, H - mb)}, red, 1);
        if (!vline_label.empty())
            cv::putText(img, vline_label, {x + 6, mt + 18}, cv::FONT_HERSHEY_SIMPLEX, 0.45, red, 1);
    }

    for (std::size_t i = 1; i < series.x.size(); ++i)
        cv::line(img, {px(series.x[i - 1]), py(series.y[i - 1])},
                 {px(series.x[i]), py(series.y[i])}, blue, 2);
    for (std::size_t i = 0; i < series.x.size(); ++i)
        cv::circle(img, {px(series.x[i]), py(series.y[i])}, 3, blue, cv::FILLED);

    cv::putText(img, title, {ml, 30}, cv::FONT_HERSHEY_SIMPLEX, 0.7, black, 1);
    cv::putText(img, x_label, {W / 2 - 30, H - 18}, cv::FONT_HERSHEY_SIMPLEX, 0.55, black, 1);
    cv::putText(img, y_label, {8, mt - 12}, cv::FONT_HERSHEY_SIMPLEX, 0.55, black, 1);

    if (!cv::imwrite(path, img)) throw std::runtime_error("plot: cannot write " + path);
}

} // namespace catgan

#endif // CATGAN_PLOT_HPP

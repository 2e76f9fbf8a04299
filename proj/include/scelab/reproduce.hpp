#pragma once

// Plot-data generation for the standard figures: one CSV per panel with the
// plotted series and the participation floor |I| * c(xi).

#include "scelab/iec.hpp"
#include "scelab/parallel.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace scelab {

enum class Figure { mi_vs_payment, sensitivity_vs_payment, sce_vs_effort, sce_vs_tasks, convergence };
enum class Scale { desk, paper };

std::string to_string(Figure f);
Figure parse_figure(std::string_view text);
std::string to_string(Scale s);
Scale parse_scale(std::string_view text);

struct ReproduceOptions {
    Scale scale = Scale::desk;
    std::uint64_t seed = 1;
    std::size_t replicates = 0;  // 0: scale default (500 desk, 5000 paper)
    std::size_t seeds = 0;       // 0: scale default (2 desk, 1 paper)
    double sce_step = 5.0;
    Execution execution = Execution::parallel;

    std::size_t effective_replicates() const;
    std::size_t effective_seeds() const;
};

struct PlotPoint {
    std::string series;
    double x = 0.0, x_stderr = 0.0;
    double y = 0.0, y_stderr = 0.0;
    double ir_floor = 0.0;  // |I| * c(xi) at the point's effort
    std::string error;  // set when the point could not be computed
};

struct FigurePanel {
    std::string name;  // used in the file name
    double effort = 0.0;  // 0 when efforts vary along the x axis
    std::string x_label, y_label;
    std::vector<PlotPoint> points;
};

/// Mechanisms plotted in the MI/sensitivity versus payment panels.
std::vector<std::string> payment_figure_mechanisms();

/// Computes every panel of a figure. Estimates are averaged over
/// effective_seeds() seeds derived from options.seed.
std::vector<FigurePanel> figure_data(Figure figure, const ReproduceOptions& options);

void write_panel_csv(std::ostream& out, const FigurePanel& panel);

/// Writes one CSV per panel (`<figure>_<panel>.csv`) plus a manifest into
/// `out_dir`; returns the CSV paths.
std::vector<std::string> reproduce(Figure figure, const ReproduceOptions& options, const std::string& out_dir);

/// First sample count n such that, for every later count, the values in the
/// trailing window ending there have standard deviation below `threshold`
/// (relative to the final value when `relative`). Returns running.size()
/// when the series never stabilizes.
std::size_t stabilization_count(const std::vector<double>& running, std::size_t window, double threshold,
                                bool relative);

}  // namespace scelab

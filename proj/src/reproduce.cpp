#include "scelab/reproduce.hpp"

#include "scelab/equivalence.hpp"
#include "scelab/error.hpp"
#include "scelab/experiment.hpp"
#include "scelab/metrics.hpp"
#include "scelab/payments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

namespace scelab {

std::string to_string(Figure f)
{
    switch (f) {
    case Figure::mi_vs_payment: return "mi_vs_payment";
    case Figure::sensitivity_vs_payment: return "sensitivity_vs_payment";
    case Figure::sce_vs_effort: return "sce_vs_effort";
    case Figure::sce_vs_tasks: return "sce_vs_tasks";
    case Figure::convergence: return "convergence";
    }
    return "?";
}

Figure parse_figure(std::string_view text)
{
    for (auto f : {Figure::mi_vs_payment, Figure::sensitivity_vs_payment, Figure::sce_vs_effort, Figure::sce_vs_tasks,
                   Figure::convergence})
        if (text == to_string(f)) return f;
    throw ConfigError("unknown figure '" + std::string(text) + "'");
}

std::string to_string(Scale s) { return s == Scale::desk ? "desk" : "paper"; }

Scale parse_scale(std::string_view text)
{
    if (text == "desk") return Scale::desk;
    if (text == "paper") return Scale::paper;
    throw ConfigError("unknown scale '" + std::string(text) + "'");
}

std::size_t ReproduceOptions::effective_replicates() const
{
    if (replicates) return replicates;
    return scale == Scale::desk ? 500 : 5000;
}

std::size_t ReproduceOptions::effective_seeds() const
{
    if (seeds) return seeds;
    return scale == Scale::desk ? 2 : 1;
}

std::vector<std::string> payment_figure_mechanisms()
{
    return {"sc:20", "sc:40", "sc:60", "sc:80", "sc:100", "oa", "pts", "ca", "fmi:kl", "fmi:h2", "dmi"};
}

namespace {

const std::vector<std::string> kPeerMechanisms{"oa", "pts", "ca", "fmi:kl", "fmi:h2", "dmi"};

Seed seed_for(const ReproduceOptions& o, std::size_t s, std::string_view metric)
{
    return Seed(o.seed).child("seed").child(s).child(metric);
}

// Mean over seeds; stderr of the seed average.
MetricEstimate over_seeds(const ReproduceOptions& o, const std::function<MetricEstimate(std::size_t)>& one)
{
    const std::size_t n = o.effective_seeds();
    MetricEstimate out;
    double var = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto e = one(s);
        out.kind = e.kind;
        out.value += e.value;
        var += e.stderr_value * e.stderr_value;
        out.replicates += e.replicates;
        out.dropped += e.dropped;
    }
    out.value /= static_cast<double>(n);
    out.stderr_value = std::sqrt(var) / static_cast<double>(n);
    return out;
}

PlotPoint make_point(const std::string& series, double ir_floor, const std::function<void(PlotPoint&)>& fill)
{
    PlotPoint p;
    p.series = series;
    p.ir_floor = ir_floor;
    try {
        fill(p);
    } catch (const std::exception& e) {
        p.x = p.y = p.x_stderr = p.y_stderr = std::nan("");
        p.error = e.what();
    }
    return p;
}

std::string effort_name(double xi) { return "xi_" + format_double(xi); }

std::vector<FigurePanel> versus_payment(bool use_mi, const ReproduceOptions& o)
{
    const IecConfig cfg = paper_base();
    const std::size_t reps = o.effective_replicates();
    std::vector<FigurePanel> panels;
    for (double xi : {0.5, 0.6, 0.7, 0.8}) {
        FigurePanel panel;
        panel.name = effort_name(xi);
        panel.effort = xi;
        panel.x_label = use_mi ? "measurement_integrity" : "sensitivity";
        panel.y_label = "total_payment";
        const double floor = static_cast<double>(cfg.num_agents) * cost(cfg, xi);
        for (const auto& id : payment_figure_mechanisms()) {
            const Measurement m = Measurement::parse(id);
            panel.points.push_back(make_point(id, floor, [&](PlotPoint& p) {
                const auto x = over_seeds(o, [&](std::size_t s) {
                    if (use_mi) return measurement_integrity(cfg, m, xi, reps, seed_for(o, s, "mi"), o.execution);
                    SensitivityOptions so;
                    so.iterations = reps;
                    so.execution = o.execution;
                    return sensitivity_proxy(cfg, m, xi, so, seed_for(o, s, "sensitivity"));
                });
                const auto y = over_seeds(o, [&](std::size_t s) {
                    CalibrationOptions co;
                    co.replicates = reps;
                    co.execution = o.execution;
                    return total_payment(cfg, m, xi, co, seed_for(o, s, "payment"));
                });
                p.x = x.value;
                p.x_stderr = x.stderr_value;
                p.y = y.value;
                p.y_stderr = y.stderr_value;
            }));
        }
        panels.push_back(std::move(panel));
    }
    return panels;
}

std::vector<std::unique_ptr<CurveCache>> sc_curves(const IecConfig& cfg, double xi, const ReproduceOptions& o)
{
    std::vector<std::unique_ptr<CurveCache>> curves;
    for (std::size_t s = 0; s < o.effective_seeds(); ++s)
        curves.push_back(std::make_unique<CurveCache>(
            mi_curve(cfg, xi, o.effective_replicates(), seed_for(o, s, "mi"), o.execution)));
    return curves;
}

// Spread of SCE over seeds as the point's error bar.
void fill_sce_point(PlotPoint& p, const IecConfig& cfg, const Measurement& m, double xi, const ReproduceOptions& o,
                    std::vector<std::unique_ptr<CurveCache>>& curves)
{
    const std::size_t reps = o.effective_replicates();
    std::vector<double> values;
    for (std::size_t s = 0; s < o.effective_seeds(); ++s) {
        SceOptions so;
        so.search.step = o.sce_step;
        so.replicates = reps;
        so.execution = o.execution;
        values.push_back(sce_mi(cfg, m, xi, so, seed_for(o, s, "mi"), curves[s].get()).sce_percent);
    }
    const auto sum = summarize(values);
    p.y = sum.mean;
    p.y_stderr = sum.stderr_mean;
}

std::vector<FigurePanel> sce_vs_effort(const ReproduceOptions& o)
{
    const IecConfig cfg = paper_base();
    FigurePanel panel;
    panel.name = "sce_mi";
    panel.x_label = "effort";
    panel.y_label = "sce_percent";
    for (double xi : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        auto curves = sc_curves(cfg, xi, o);
        const double floor = static_cast<double>(cfg.num_agents) * cost(cfg, xi);
        for (const auto& id : kPeerMechanisms)
            panel.points.push_back(make_point(id, floor, [&](PlotPoint& p) {
                p.x = xi;
                fill_sce_point(p, cfg, Measurement::parse(id), xi, o, curves);
            }));
    }
    return {panel};
}

std::vector<FigurePanel> sce_vs_tasks(const ReproduceOptions& o)
{
    std::vector<FigurePanel> panels;
    for (double xi : {0.5, 0.7, 0.9}) {
        FigurePanel panel;
        panel.name = effort_name(xi);
        panel.effort = xi;
        panel.x_label = "tasks_per_agent";
        panel.y_label = "sce_percent";
        for (std::size_t k = 3; k <= 10; ++k) {
            const IecConfig cfg = paper_base(k);
            auto curves = sc_curves(cfg, xi, o);
            const double floor = static_cast<double>(cfg.num_agents) * cost(cfg, xi);
            for (const auto& id : kPeerMechanisms)
                panel.points.push_back(make_point(id, floor, [&](PlotPoint& p) {
                    p.x = static_cast<double>(cfg.tasks_per_agent);
                    fill_sce_point(p, cfg, Measurement::parse(id), xi, o, curves);
                }));
        }
        panels.push_back(std::move(panel));
    }
    return panels;
}

std::vector<FigurePanel> convergence(const ReproduceOptions& o)
{
    const IecConfig cfg = paper_base();
    const double xi = 0.6;
    const std::size_t n = o.effective_replicates() * o.effective_seeds();
    const std::size_t stride = std::max<std::size_t>(1, n / 100);
    const std::size_t window = std::max<std::size_t>(10, n / 10);
    const double floor = static_cast<double>(cfg.num_agents) * cost(cfg, xi);

    FigurePanel mi_panel{"mi", xi, "samples", "measurement_integrity", {}};
    FigurePanel pay_panel{"total_payment", xi, "samples", "total_payment", {}};
    FigurePanel stab_panel{"stabilization", xi, "mi_samples", "payment_samples", {}};

    for (const std::string id : {"sc:50", "oa", "ca", "fmi:kl"}) {
        const Measurement m = Measurement::parse(id);
        const auto per = integrity_per_replicate(cfg, m, xi, n, seed_for(o, 0, "mi"), o.execution);
        CalibrationOptions co;
        co.replicates = n;
        co.execution = o.execution;
        const auto diffs = borda_beaten_differences(cfg, m, xi, co, seed_for(o, 0, "payment"));

        std::vector<double> mi_run(n, std::nan("")), pay_run(n, std::nan(""));
        double mi_sum = 0.0, d_sum = 0.0, d_sq = 0.0;
        std::size_t mi_count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (per[i]) {
                mi_sum += *per[i];
                ++mi_count;
            }
            if (mi_count) mi_run[i] = mi_sum / static_cast<double>(mi_count);
            d_sum += diffs[i];
            d_sq += diffs[i] * diffs[i];
            const double cnt = static_cast<double>(i + 1);
            const double mean = d_sum / cnt;
            const double var = i > 0 ? std::max(0.0, (d_sq - cnt * mean * mean) / (cnt - 1.0)) : 0.0;
            try {
                pay_run[i] = finish_calibration(cfg, xi, mean / co.deviation, std::sqrt(var / cnt) / co.deviation, i + 1)
                                 .total_payment;
            } catch (const CalibrationError&) {
            }
            if ((i + 1) % stride == 0 || i + 1 == n) {
                PlotPoint a{id, cnt, 0.0, mi_run[i], 0.0, floor, ""};
                PlotPoint b{id, cnt, 0.0, pay_run[i], 0.0, floor, ""};
                mi_panel.points.push_back(a);
                pay_panel.points.push_back(b);
            }
        }
        PlotPoint s;
        s.series = id;
        s.ir_floor = floor;
        s.x = static_cast<double>(stabilization_count(mi_run, window, 0.01, false));
        s.y = static_cast<double>(stabilization_count(pay_run, window, 0.05, true));
        stab_panel.points.push_back(s);
    }
    return {mi_panel, pay_panel, stab_panel};
}

}  // namespace

std::size_t stabilization_count(const std::vector<double>& running, std::size_t window, double threshold,
                                bool relative)
{
    const std::size_t n = running.size();
    if (window == 0 || n < window) return n;
    const double scale = relative ? std::abs(running.back()) : 1.0;
    std::size_t first_stable = n;
    // Walk backwards: the answer is the start of the longest stable suffix.
    for (std::size_t end = n; end >= window; --end) {
        std::vector<double> w(running.begin() + static_cast<std::ptrdiff_t>(end - window),
                              running.begin() + static_cast<std::ptrdiff_t>(end));
        bool ok = true;
        for (double v : w) ok = ok && std::isfinite(v);
        if (ok) {
            const auto s = summarize(w);
            ok = scale > 0.0 && s.sd / scale < threshold;
        }
        if (!ok) break;
        first_stable = end;
    }
    return first_stable;
}

std::vector<FigurePanel> figure_data(Figure figure, const ReproduceOptions& options)
{
    switch (figure) {
    case Figure::mi_vs_payment: return versus_payment(true, options);
    case Figure::sensitivity_vs_payment: return versus_payment(false, options);
    case Figure::sce_vs_effort: return sce_vs_effort(options);
    case Figure::sce_vs_tasks: return sce_vs_tasks(options);
    case Figure::convergence: return convergence(options);
    }
    throw ConfigError("unhandled figure");
}

void write_panel_csv(std::ostream& out, const FigurePanel& panel)
{
    out << "series,x,x_stderr,y,y_stderr,ir_floor,error\n";
    for (const auto& p : panel.points)
        out << csv_escape(p.series) << ',' << format_double(p.x) << ',' << format_double(p.x_stderr) << ','
            << format_double(p.y) << ',' << format_double(p.y_stderr) << ',' << format_double(p.ir_floor) << ','
            << csv_escape(p.error) << '\n';
}

std::vector<std::string> reproduce(Figure figure, const ReproduceOptions& options, const std::string& out_dir)
{
    ManifestInfo info;
    info.command = "reproduce " + to_string(figure);
    info.started = utc_timestamp();
    const auto t0 = std::chrono::steady_clock::now();
    const auto panels = figure_data(figure, options);

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths;
    for (const auto& panel : panels) {
        const auto path = (std::filesystem::path(out_dir) / (to_string(figure) + "_" + panel.name + ".csv")).string();
        std::ofstream out(path);
        if (!out) throw Error("cannot write '" + path + "'");
        write_panel_csv(out, panel);
        paths.push_back(path);
    }
    info.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    info.finished = utc_timestamp();
    info.outputs = paths;
    info.config_json = "{\"figure\":\"" + to_string(figure) + "\",\"scale\":\"" + to_string(options.scale) +
                       "\",\"seed\":" + std::to_string(options.seed) +
                       ",\"replicates\":" + std::to_string(options.effective_replicates()) +
                       ",\"seeds\":" + std::to_string(options.effective_seeds()) +
                       ",\"sce_step\":" + format_double(options.sce_step) + "}";
    write_manifest((std::filesystem::path(out_dir) / (to_string(figure) + ".manifest.json")).string(), info);
    return paths;
}

}  // namespace scelab

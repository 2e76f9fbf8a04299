#include "scelab/experiment.hpp"

#include "scelab/error.hpp"
#include "scelab/metrics.hpp"
#include "scelab/payments.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>

namespace scelab {

std::string csv_header()
{
    return "schema_version,mechanism,divergence,effort,metric,value,stderr,replicates,dropped,seed,borda_scale,"
           "ir_binding,sce_clamped,f_curve,error";
}

std::string to_string(CellMetric m)
{
    switch (m) {
    case CellMetric::mi: return "mi";
    case CellMetric::sensitivity: return "sensitivity";
    case CellMetric::total_payment: return "total_payment";
    case CellMetric::sce_mi: return "sce_mi";
    case CellMetric::sce_sensitivity: return "sce_sensitivity";
    }
    return "?";
}

CellMetric parse_cell_metric(std::string_view text)
{
    for (auto m : {CellMetric::mi, CellMetric::sensitivity, CellMetric::total_payment, CellMetric::sce_mi,
                   CellMetric::sce_sensitivity})
        if (text == to_string(m)) return m;
    throw ConfigError("unknown metric '" + std::string(text) + "'");
}

IecConfig iec_preset(const std::string& name, std::size_t k)
{
    if (name == "paper-base") return paper_base(k);
    throw ConfigError("unknown preset '" + name + "'");
}

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const
{
    iec.validate();
    if (mechanisms.empty()) throw ConfigError("no mechanisms configured");
    if (efforts.empty()) throw ConfigError("no effort levels configured");
    for (double e : efforts)
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError("effort level " + format_double(e) + " outside (0,1]");
    for (const auto& m : mechanisms) m.validate();
    if (metrics.empty()) throw ConfigError("no metrics configured");
    if (replicates == 0) throw ConfigError("replicates must be positive");
    if (iterations == 0) throw ConfigError("iterations must be positive");
    if (!(sce_step > 0.0 && sce_step <= 100.0)) throw ConfigError("sce_step must be in (0,100]");
    if (!(deviation > 0.0)) throw ConfigError("deviation must be positive");
    for (double e : efforts)
        if (!(deviation < e)) throw ConfigError("deviation must be smaller than every effort level");
    if (!(replace_prob >= 0.0 && replace_prob <= 1.0)) throw ConfigError("replace_prob must be in [0,1]");
    if (resample && batch == 0) throw ConfigError("batch must be positive");
    if (output.empty()) throw ConfigError("output path is empty");
}

namespace {

Matrix matrix_from_list(const std::vector<double>& values, std::size_t k, const std::string& key)
{
    if (values.size() != k * k)
        throw ConfigError("'" + key + "' needs " + std::to_string(k * k) + " entries (row-major)");
    Matrix m(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) m(r, c) = values[r * k + c];
    return m;
}

const char* const kKnownKeys[] = {
    "extends", "tasks_k", "num_agents", "num_tasks", "tasks_per_agent", "agents_per_task", "prior", "gamma_work",
    "gamma_shirk", "cost_coefficient", "assignment", "mechanisms", "mechanism", "divergence", "check_ratio",
    "estimation", "peers", "min_shared", "efforts", "metrics", "replicates", "iterations", "sce_step", "deviation",
    "replace_prob", "resample", "batch", "independent_target", "full_grid", "isotonic", "seed", "output", "serial",
};

}  // namespace

ExperimentConfig ExperimentConfig::from_document(const ConfigDocument& doc)
{
    for (const auto& [key, value] : doc.values()) {
        bool known = false;
        for (const char* k : kKnownKeys) known = known || key == k;
        if (!known) throw ParseError("unknown key '" + key + "'", value.line);
    }

    ExperimentConfig c;
    c.preset = doc.has("extends") ? doc.get_string("extends") : "";
    if (doc.has("tasks_k")) c.tasks_k = doc.get_count("tasks_k");
    if (!c.preset.empty()) {
        c.iec = iec_preset(c.preset, c.tasks_k);
    } else {
        for (const char* k : {"num_agents", "num_tasks", "tasks_per_agent", "agents_per_task", "prior", "gamma_work"})
            if (!doc.has(k)) throw ConfigError(std::string("without a preset, '") + k + "' is required");
        c.iec = IecConfig{};
        c.iec.gamma_shirk = Matrix();
    }
    auto& iec = c.iec;
    if (doc.has("num_agents")) iec.num_agents = doc.get_count("num_agents");
    if (doc.has("num_tasks")) iec.num_tasks = doc.get_count("num_tasks");
    if (doc.has("tasks_per_agent")) iec.tasks_per_agent = doc.get_count("tasks_per_agent");
    if (doc.has("agents_per_task")) iec.agents_per_task = doc.get_count("agents_per_task");
    if (doc.has("prior")) iec.prior = doc.get_number_list("prior");
    const std::size_t k = iec.prior.size();
    if (doc.has("gamma_work")) iec.gamma_work = matrix_from_list(doc.get_number_list("gamma_work"), k, "gamma_work");
    if (doc.has("gamma_shirk"))
        iec.gamma_shirk = matrix_from_list(doc.get_number_list("gamma_shirk"), k, "gamma_shirk");
    else if (c.preset.empty())
        iec.gamma_shirk = Matrix::uniform_rows(k);
    if (doc.has("cost_coefficient")) iec.cost_coefficient = doc.get_number("cost_coefficient");
    if (doc.has("assignment")) iec.assignment = parse_assignment_mode(doc.get_string("assignment"));

    if (doc.has("mechanisms") && doc.has("mechanism"))
        throw ConfigError("give either 'mechanisms' or 'mechanism', not both");
    if (doc.has("mechanisms")) {
        for (const auto& id : doc.get_list("mechanisms")) c.mechanisms.push_back(Measurement::parse(id));
        for (const char* k : {"divergence", "check_ratio"})
            if (doc.has(k)) throw ConfigError(std::string("'") + k + "' only applies to a single 'mechanism'");
    } else if (doc.has("mechanism")) {
        Measurement m = Measurement::parse(doc.get_string("mechanism"));
        if (doc.has("divergence")) {
            if (m.kind != MechanismKind::f_mutual_information)
                throw ConfigError("'divergence' only applies to mechanism fmi");
            m.divergence = parse_divergence(doc.get_string("divergence"));
        }
        if (doc.has("check_ratio")) {
            if (m.kind != MechanismKind::spot_check) throw ConfigError("'check_ratio' only applies to mechanism sc");
            m.check_ratio = doc.get_number("check_ratio");
        }
        c.mechanisms.push_back(m);
    }
    for (auto& m : c.mechanisms) {
        if (doc.has("estimation")) m.estimation = parse_estimation_mode(doc.get_string("estimation"));
        if (doc.has("peers")) m.peers = parse_peer_scope(doc.get_string("peers"));
        if (doc.has("min_shared")) m.min_shared = doc.get_count("min_shared");
    }

    if (doc.has("efforts")) c.efforts = doc.get_number_list("efforts");
    if (doc.has("metrics")) {
        c.metrics.clear();
        for (const auto& m : doc.get_list("metrics")) c.metrics.push_back(parse_cell_metric(m));
    }
    if (doc.has("replicates")) c.replicates = doc.get_count("replicates");
    if (doc.has("iterations")) c.iterations = doc.get_count("iterations");
    if (doc.has("sce_step")) c.sce_step = doc.get_number("sce_step");
    if (doc.has("deviation")) c.deviation = doc.get_number("deviation");
    if (doc.has("replace_prob")) c.replace_prob = doc.get_number("replace_prob");
    if (doc.has("resample")) c.resample = doc.get_bool("resample");
    if (doc.has("batch")) c.batch = doc.get_count("batch");
    if (doc.has("independent_target")) c.independent_target = doc.get_bool("independent_target");
    if (doc.has("full_grid")) c.full_grid = doc.get_bool("full_grid");
    if (doc.has("isotonic")) c.isotonic = doc.get_bool("isotonic");
    if (doc.has("seed")) c.seed = doc.get_u64("seed");
    if (doc.has("output")) c.output = doc.get_string("output");
    if (doc.has("serial") && doc.get_bool("serial")) c.execution = Execution::serial;
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return from_document(ConfigDocument::parse(in));
}

// ---------------------------------------------------------------------------
// Running

Seed metric_seed(std::uint64_t master, CellMetric metric)
{
    const Seed base(master);
    switch (metric) {
    case CellMetric::mi:
    case CellMetric::sce_mi: return base.child("mi");
    case CellMetric::sensitivity:
    case CellMetric::sce_sensitivity: return base.child("sensitivity");
    case CellMetric::total_payment: return base.child("payment");
    }
    return base;
}

namespace {

ResultRow base_row(const ExperimentConfig& c, const Measurement& m, double effort, CellMetric metric)
{
    ResultRow r;
    r.mechanism = m.id();
    if (m.kind == MechanismKind::f_mutual_information) r.divergence = to_string(m.divergence);
    r.effort = effort;
    r.metric = metric;
    r.seed = c.seed;
    return r;
}

void fill_estimate(ResultRow& r, const MetricEstimate& e)
{
    r.value = e.value;
    r.stderr_value = e.stderr_value;
    r.replicates = e.replicates;
    r.dropped = e.dropped;
}

void fill_sce(ResultRow& r, const SceResult& s, std::size_t replicates)
{
    r.value = s.sce_percent;
    // Delta-method error through the bracketing slope of the SC curve.
    std::optional<double> se;
    if (s.clamped == Clamp::none && !s.degenerate_interval) {
        const double lo = std::floor(s.sce_percent / s.step + 1e-9) * s.step;
        const CurvePoint* a = nullptr;
        const CurvePoint* b = nullptr;
        for (const auto& p : s.f_curve) {
            if (std::abs(p.check_ratio - lo) < 1e-9) a = &p;
            if (std::abs(p.check_ratio - lo - s.step) < 1e-9) b = &p;
        }
        if (a && b && b->value > a->value) se = s.f_target_stderr * s.step / (b->value - a->value);
        else if (a && !b) se = 0.0;  // landed exactly on a grid point at the top
    }
    r.stderr_value = se;
    r.replicates = replicates;
    r.sce_clamped = s.clamped;
    r.f_curve = s.f_curve;
}

struct Curves {
    std::unique_ptr<CurveCache> mi, sensitivity;
};

}  // namespace

std::vector<ResultRow> run(const ExperimentConfig& c)
{
    c.validate();
    SensitivityOptions sens;
    sens.manipulation.replace_prob = c.replace_prob;
    sens.iterations = c.iterations;
    sens.resample = c.resample;
    sens.batch = c.batch;
    sens.execution = Execution::serial;  // cells are the parallel unit

    SceOptions sce;
    sce.search.step = c.sce_step;
    sce.search.full_grid = c.full_grid;
    sce.search.isotonic = c.isotonic;
    sce.replicates = c.replicates;
    sce.sensitivity = sens;
    sce.independent_target = c.independent_target;
    sce.execution = Execution::serial;

    CalibrationOptions cal;
    cal.deviation = c.deviation;
    cal.replicates = c.replicates;
    cal.execution = Execution::serial;

    std::vector<Curves> curves(c.efforts.size());
    for (std::size_t i = 0; i < c.efforts.size(); ++i) {
        const double xi = c.efforts[i];
        curves[i].mi = std::make_unique<CurveCache>(
            mi_curve(c.iec, xi, c.replicates, metric_seed(c.seed, CellMetric::mi), Execution::serial));
        curves[i].sensitivity = std::make_unique<CurveCache>(
            sensitivity_curve(c.iec, xi, sens, metric_seed(c.seed, CellMetric::sensitivity)));
    }

    const std::size_t n_cells = c.mechanisms.size() * c.efforts.size();
    const auto cells = map_indices<std::vector<ResultRow>>(n_cells, c.execution, [&](std::size_t cell) {
        const Measurement& m = c.mechanisms[cell / c.efforts.size()];
        const std::size_t ei = cell % c.efforts.size();
        const double xi = c.efforts[ei];
        std::vector<ResultRow> rows;
        for (CellMetric metric : c.metrics) {
            ResultRow r = base_row(c, m, xi, metric);
            const Seed seed = metric_seed(c.seed, metric);
            try {
                switch (metric) {
                case CellMetric::mi:
                    fill_estimate(r, measurement_integrity(c.iec, m, xi, c.replicates, seed, Execution::serial));
                    break;
                case CellMetric::sensitivity: fill_estimate(r, sensitivity_proxy(c.iec, m, xi, sens, seed)); break;
                case CellMetric::total_payment: {
                    const auto res = calibrate_borda(c.iec, m, xi, cal, seed);
                    r.value = res.total_payment;
                    r.stderr_value = res.total_payment_stderr;
                    r.replicates = res.replicates;
                    r.borda_scale = res.borda_scale;
                    r.ir_binding = res.ir_binding;
                    break;
                }
                case CellMetric::sce_mi:
                    fill_sce(r, sce_mi(c.iec, m, xi, sce, seed, curves[ei].mi.get()), c.replicates);
                    break;
                case CellMetric::sce_sensitivity:
                    fill_sce(r, sce_sensitivity(c.iec, m, xi, sce, seed, curves[ei].sensitivity.get()),
                             c.iterations);
                    break;
                }
            } catch (const std::exception& e) {
                r = base_row(c, m, xi, metric);
                r.error = e.what();
            }
            rows.push_back(std::move(r));
        }
        return rows;
    });

    std::vector<ResultRow> out;
    for (const auto& cell : cells) out.insert(out.end(), cell.begin(), cell.end());
    return out;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows)
{
    out << csv_header() << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : rows) {
        std::string curve;
        for (const auto& p : r.f_curve) {
            if (!curve.empty()) curve += ';';
            curve += format_double(p.check_ratio) + ':' + format_double(p.value) + ':' + format_double(p.stderr_value);
        }
        out << kSchemaVersion << ',' << csv_escape(r.mechanism) << ',' << r.divergence << ','
            << format_double(r.effort) << ',' << to_string(r.metric) << ',' << opt(r.value) << ','
            << opt(r.stderr_value) << ',' << r.replicates << ',' << r.dropped << ',' << r.seed << ','
            << opt(r.borda_scale) << ',' << (r.ir_binding ? (*r.ir_binding ? "true" : "false") : "") << ','
            << (r.sce_clamped ? to_string(*r.sce_clamped) : "") << ',' << curve << ',' << csv_escape(r.error)
            << '\n';
    }
}

// ---------------------------------------------------------------------------
// Files and manifests

std::string manifest_path(const std::string& output)
{
    std::filesystem::path p(output);
    p.replace_extension(".manifest.json");
    return p.string();
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string to_json(const ExperimentConfig& c)
{
    nlohmann::ordered_json j;
    j["preset"] = c.preset;
    j["tasks_k"] = c.tasks_k;
    j["num_agents"] = c.iec.num_agents;
    j["num_tasks"] = c.iec.num_tasks;
    j["tasks_per_agent"] = c.iec.tasks_per_agent;
    j["agents_per_task"] = c.iec.agents_per_task;
    j["prior"] = c.iec.prior;
    auto matrix = [](const Matrix& m) {
        std::vector<std::vector<double>> rows;
        for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
        return rows;
    };
    j["gamma_work"] = matrix(c.iec.gamma_work);
    j["gamma_shirk"] = matrix(c.iec.gamma_shirk);
    j["cost_coefficient"] = c.iec.cost_coefficient;
    j["assignment"] = to_string(c.iec.assignment);
    std::vector<std::string> mechanisms;
    for (const auto& m : c.mechanisms) mechanisms.push_back(m.id());
    j["mechanisms"] = mechanisms;
    j["efforts"] = c.efforts;
    std::vector<std::string> metrics;
    for (auto m : c.metrics) metrics.push_back(to_string(m));
    j["metrics"] = metrics;
    j["replicates"] = c.replicates;
    j["iterations"] = c.iterations;
    j["sce_step"] = c.sce_step;
    j["deviation"] = c.deviation;
    j["replace_prob"] = c.replace_prob;
    j["resample"] = c.resample;
    j["batch"] = c.batch;
    j["independent_target"] = c.independent_target;
    j["full_grid"] = c.full_grid;
    j["isotonic"] = c.isotonic;
    j["seed"] = c.seed;
    j["output"] = c.output;
    return j.dump();
}

void write_manifest(const std::string& path, const ManifestInfo& info)
{
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = info.command;
    j["config"] = info.config_json.empty() ? nlohmann::ordered_json::object()
                                           : nlohmann::ordered_json::parse(info.config_json);
    j["outputs"] = info.outputs;
    j["started"] = info.started;
    j["finished"] = info.finished;
    j["seconds"] = info.seconds;
    j["threads"] = available_threads();
#ifdef __VERSION__
    j["compiler"] = __VERSION__;
#endif
    j["cxx_standard"] = __cplusplus;
    std::ofstream out(path);
    if (!out) throw Error("cannot write manifest '" + path + "'");
    out << j.dump(2) << '\n';
}

std::vector<ResultRow> run_to_files(const ExperimentConfig& config, const std::string& command)
{
    config.validate();
    ManifestInfo info;
    info.command = command;
    info.started = utc_timestamp();
    const auto t0 = std::chrono::steady_clock::now();
    auto rows = run(config);
    {
        std::ofstream out(config.output);
        if (!out) throw Error("cannot write '" + config.output + "'");
        write_csv(out, rows);
    }
    info.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    info.finished = utc_timestamp();
    info.config_json = to_json(config);
    info.outputs = {config.output};
    write_manifest(manifest_path(config.output), info);
    return rows;
}

}  // namespace scelab

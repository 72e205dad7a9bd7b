#pragma once

// The hmetric command-line tool. Needs CLI11, nlohmann/json and spdlog on
// top of the core headers.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 malformed input, 3 bad
// configuration, 4 degenerate data.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "hmeasure.hpp"
#include "hmeasure/io.hpp"

namespace hmeasure::cli {

using nlohmann::json;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int input = 2;
inline constexpr int config = 3;
inline constexpr int degenerate = 4;
} // namespace exit_code

inline constexpr std::string_view schema_version = "1";
inline constexpr std::string_view tool_name = "hmetric";

/// Raw flag values as typed on the command line.
struct Options {
    std::string command;
    std::string input;
    std::string out;
    std::string weight = "default";
    std::optional<double> alpha;
    std::optional<double> beta;
    std::string prior = "empirical";
    std::optional<double> pi0;
    std::string mode = "calibrated";
    std::string method = "quadrature";
    std::string reference = "quadrature";
    std::size_t resolution = 1024;
    std::size_t mc_samples = 10000;
    std::size_t outer_samples = 10000;
    std::optional<std::uint64_t> seed;
    std::string normalize = "reject";
    std::vector<double> screen;
    std::vector<std::string> u_dist{"mixture"};
    std::vector<std::string> columns;
    std::string column;
    unsigned threads = 1;
};

/// Weight selection before the priors are known.
struct WeightChoice {
    enum class Kind { default_weight, uniform, beta, tabulated } kind = Kind::default_weight;
    double alpha = 1.0;
    double beta = 1.0;
    std::string path;
    std::shared_ptr<const TabulatedWeight> table;

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind) {
        case Kind::default_weight: return "default";
        case Kind::uniform: return "uniform";
        case Kind::beta: os << "beta(" << alpha << ", " << beta << ")"; return os.str();
        case Kind::tabulated: return "tabulated(" + path + ")";
        }
        return {};
    }
};

/// Validated configuration for one invocation.
struct Settings {
    std::string command;
    EvalConfig eval;
    PriorSpec prior;
    WeightChoice weight;
    Normalization normalization = Normalization::reject;
    std::vector<double> screen;
    std::vector<std::string> u_labels;
    std::vector<ThresholdDistribution> u;
    std::size_t resolution = 1024;
    unsigned threads = 1;

    json echo() const {
        json j;
        j["command"] = command;
        j["weight"] = weight.describe();
        j["prior"] = prior.describe();
        j["mode"] = std::string(to_string(eval.mode));
        j["method"] = std::string(to_string(eval.method));
        j["reference"] = eval.reference == ReferenceMethod::quadrature ? "quadrature" : "closed_form";
        j["resolution"] = resolution;
        j["mc_samples"] = eval.mc_samples;
        j["outer_samples"] = eval.outer_samples;
        j["seed"] = eval.seed ? json(*eval.seed) : json(nullptr);
        j["normalize"] = std::string(to_string(normalization));
        j["ties"] = "half_credit";
        j["screen"] = screen;
        j["u_dist"] = u_labels;
        return j;
    }
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

inline double number(std::string_view s, std::string_view what) {
    double v = 0.0;
    if (!io::detail::parse_double(io::detail::trim(s), v))
        throw ConfigError("cannot parse '" + std::string(s) + "' as a number for " + std::string(what));
    return v;
}

/// "name" or "name:a,b" -> (name, params)
inline std::pair<std::string, std::string> head_and_args(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        return {s, {}};
    return {s.substr(0, colon), s.substr(colon + 1)};
}

inline std::pair<double, double> shape_pair(const std::string& args, std::string_view what) {
    const auto parts = split_list(args, ',');
    if (parts.size() != 2)
        throw ConfigError(std::string(what) + " needs two shape parameters, as in beta:2,2");
    return {number(parts[0], what), number(parts[1], what)};
}

inline std::shared_ptr<const TabulatedWeight> load_table(const std::string& path, MassPolicy policy,
                                                         std::string_view what) {
    try {
        const auto pts = io::read_weight_table(path);
        return std::make_shared<const TabulatedWeight>(pts, policy);
    } catch (const InputError& e) {
        throw ConfigError(std::string(what) + " file: " + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string(what) + " file: " + e.what());
    }
}

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

inline spdlog::logger& logger() {
    static const auto log = [] {
        auto l = std::make_shared<spdlog::logger>("hmetric", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::warn);
        if (const char* env = std::getenv("HMETRIC_LOG"))
            l->set_level(spdlog::level::from_str(env));
        return l;
    }();
    return *log;
}

} // namespace detail

inline WeightChoice resolve_weight(const Options& o) {
    WeightChoice w;
    const auto [name, args] = detail::head_and_args(o.weight);
    if ((o.alpha || o.beta) && name != "beta")
        throw ConfigError("--alpha and --beta only apply to --weight beta");
    if (name == "default" && args.empty()) {
        w.kind = WeightChoice::Kind::default_weight;
    } else if (name == "uniform" && args.empty()) {
        w.kind = WeightChoice::Kind::uniform;
    } else if (name == "beta") {
        w.kind = WeightChoice::Kind::beta;
        if (!args.empty()) {
            if (o.alpha || o.beta)
                throw ConfigError("give the beta weight shapes either inline or via --alpha/--beta, not both");
            std::tie(w.alpha, w.beta) = detail::shape_pair(args, "--weight beta");
        } else {
            if (!o.alpha || !o.beta)
                throw ConfigError("--weight beta needs --alpha and --beta (or beta:a,b)");
            w.alpha = *o.alpha;
            w.beta = *o.beta;
        }
        if (!(w.alpha > 0.0 && w.beta > 0.0 && std::isfinite(w.alpha) && std::isfinite(w.beta)))
            throw ConfigError("beta weight shapes must be positive and finite");
    } else if (name == "tabulated") {
        if (args.empty())
            throw ConfigError("--weight tabulated needs a path, as in tabulated:weights.csv");
        w.kind = WeightChoice::Kind::tabulated;
        w.path = args;
        w.table = detail::load_table(args, MassPolicy::require_unit, "weight");
    } else {
        throw ConfigError("unknown --weight '" + o.weight + "'; expected default, uniform, beta[:a,b] or tabulated:path");
    }
    return w;
}

inline PriorSpec resolve_prior(const Options& o) {
    const auto [name, args] = detail::head_and_args(o.prior);
    auto check_pi0 = [](double p) {
        if (!(p > 0.0 && p < 1.0))
            throw ConfigError("--pi0 must lie in (0, 1)");
        return p;
    };
    if (name == "empirical" && args.empty()) {
        if (o.pi0)
            return PriorSpec::fixed(check_pi0(*o.pi0));
        return PriorSpec::empirical();
    }
    if (name == "fixed") {
        if (!args.empty() && o.pi0)
            throw ConfigError("give pi0 either inline or via --pi0, not both");
        if (!args.empty())
            return PriorSpec::fixed(check_pi0(detail::number(args, "--prior fixed")));
        if (!o.pi0)
            throw ConfigError("--prior fixed needs --pi0");
        return PriorSpec::fixed(check_pi0(*o.pi0));
    }
    if (name == "beta") {
        if (o.pi0)
            throw ConfigError("--pi0 cannot be combined with --prior beta");
        double a = 2.0, b = 2.0;
        if (!args.empty())
            std::tie(a, b) = detail::shape_pair(args, "--prior beta");
        if (!(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)))
            throw ConfigError("prior beta shapes must be positive and finite");
        return PriorSpec::beta(a, b);
    }
    throw ConfigError("unknown --prior '" + o.prior + "'; expected empirical, fixed[:pi0] or beta[:a,b]");
}

inline ThresholdDistribution resolve_u(const std::string& spec) {
    const auto [name, args] = detail::head_and_args(spec);
    if (name == "mixture" && args.empty())
        return {ThresholdDistribution::EmpiricalMixture{}};
    if (name == "rank1" && args.empty())
        return {ThresholdDistribution::RankUniformClass1{}};
    if (name == "point") {
        const double t = detail::number(args, "--u-dist point");
        if (!(t >= 0.0 && t <= 1.0))
            throw ConfigError("--u-dist point threshold must lie in [0, 1]");
        return {ThresholdDistribution::PointMass{t}};
    }
    if (name == "tabulated") {
        if (args.empty())
            throw ConfigError("--u-dist tabulated needs a path");
        const auto table = detail::load_table(args, MassPolicy::rescale_to_unit, "threshold density");
        return {ThresholdDistribution::Tabulated{*table}};
    }
    throw ConfigError("unknown --u-dist '" + spec + "'; expected point:t, mixture, rank1 or tabulated:path");
}

inline Settings resolve(const Options& o) {
    Settings s;
    s.command = o.command;
    s.prior = resolve_prior(o);
    s.weight = resolve_weight(o);

    if (o.mode == "calibrated")
        s.eval.mode = ThresholdMode::calibrated;
    else if (o.mode == "optimal")
        s.eval.mode = ThresholdMode::optimal;
    else
        throw ConfigError("--mode must be calibrated or optimal");

    if (o.method == "quadrature")
        s.eval.method = EstimationMethod::quadrature;
    else if (o.method == "monte_carlo" || o.method == "mc")
        s.eval.method = EstimationMethod::monte_carlo;
    else
        throw ConfigError("--method must be quadrature or monte_carlo");

    if (o.reference == "quadrature")
        s.eval.reference = ReferenceMethod::quadrature;
    else if (o.reference == "closed_form")
        s.eval.reference = ReferenceMethod::closed_form;
    else
        throw ConfigError("--reference must be quadrature or closed_form");
    if (s.eval.reference == ReferenceMethod::closed_form && s.weight.kind == WeightChoice::Kind::tabulated)
        throw ConfigError("--reference closed_form needs a beta-family weight");

    if (o.normalize == "reject")
        s.normalization = Normalization::reject;
    else if (o.normalize == "minmax")
        s.normalization = Normalization::minmax;
    else if (o.normalize == "logistic")
        s.normalization = Normalization::logistic;
    else
        throw ConfigError("--normalize must be reject, minmax or logistic");

    if (o.resolution < 1024)
        throw ConfigError("--resolution must be at least 1024");
    s.resolution = o.resolution;
    s.eval.mc_samples = o.mc_samples;
    s.eval.outer_samples = o.outer_samples;
    s.eval.seed = o.seed;
    if (o.threads == 0)
        throw ConfigError("--threads must be positive");
    s.threads = o.threads;
    s.eval.workers = o.threads;
    s.eval.validate(s.prior.is_distributed());

    if (s.prior.is_distributed() && s.weight.kind != WeightChoice::Kind::default_weight)
        throw ConfigError("--prior beta fixes the weight to beta(2 - pi0, 1 + pi0); drop --weight");

    for (double p : o.screen)
        if (!(p > 0.0 && p < 1.0))
            throw ConfigError("--screen proportions must lie in (0, 1)");
    s.screen = o.screen;
    for (const auto& u : o.u_dist) {
        s.u.push_back(resolve_u(u));
        s.u_labels.push_back(u);
    }
    return s;
}

/// The priors used wherever a single (pi0, pi1) is needed. For beta
/// distributed priors those are the empirical class proportions.
inline ClassPriors point_priors(const PriorSpec& prior, const io::ScoreTable& table) {
    if (const auto* f = std::get_if<PriorSpec::Fixed>(&prior.kind))
        return f->priors;
    std::size_t ones = 0;
    for (int l : table.labels)
        ones += static_cast<std::size_t>(l);
    return ClassPriors(static_cast<double>(table.rows() - ones) / static_cast<double>(table.rows()));
}

/// The one weight applied to every score column.
inline WeightFunction shared_weight(const WeightChoice& choice, const ClassPriors& priors) {
    switch (choice.kind) {
    case WeightChoice::Kind::default_weight: return default_weight(priors);
    case WeightChoice::Kind::uniform: return WeightFunction::uniform();
    case WeightChoice::Kind::beta: return WeightFunction::beta(choice.alpha, choice.beta);
    case WeightChoice::Kind::tabulated: return WeightFunction(*choice.table);
    }
    throw ConfigError("unreachable weight kind");
}

inline json to_json(const HResult& r) {
    json j;
    j["h"] = r.h;
    j["loss"] = r.loss;
    j["reference_loss"] = r.reference_loss;
    j["mean_loss_ratio"] = r.mean_loss_ratio ? json(*r.mean_loss_ratio) : json(nullptr);
    j["weight_used"] = r.weight_used;
    j["prior_used"] = r.prior_used;
    j["mc_standard_error"] = r.mc_standard_error ? json(*r.mc_standard_error) : json(nullptr);
    j["mc_samples"] = r.mc_samples;
    j["warnings"] = r.warnings;
    return j;
}

inline json to_json(const AucResult& r) {
    return {{"auc", r.auc}, {"n_pairs", r.n_pairs}, {"tie_pairs", r.tie_pairs}, {"l_a", r.l_a}};
}

inline json to_json(const ScreeningResult& r) {
    return {{"proportion", r.proportion},
            {"basis", std::string(to_string(r.basis))},
            {"threshold_rank", r.threshold_rank},
            {"threshold", r.threshold},
            {"confusion", {{"tn", r.confusion.tn}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tp", r.confusion.tp}}},
            {"class0_recall", r.class0_recall},
            {"misclassification_rate", r.misclassification_rate}};
}

inline LabeledScores column_data(const io::ScoreColumn& col, const io::ScoreTable& table, Normalization norm) {
    try {
        return LabeledScores::ingest(col.values, table.labels, norm);
    } catch (const InputError& e) {
        throw InputError("column '" + col.name + "': " + e.what());
    }
}

/// Every metric for one score column.
inline json evaluate_column(const io::ScoreColumn& col, const io::ScoreTable& table, const Settings& s,
                            const ClassPriors& priors, const WeightFunction& weight) {
    const LabeledScores data = column_data(col, table, s.normalization);
    detail::logger().debug("evaluating column '{}' ({} rows)", col.name, data.size());

    const std::optional<WeightFunction> h_weight =
        s.prior.is_distributed() ? std::nullopt : std::optional<WeightFunction>(weight);
    const HResult h = evaluate_h(data, s.prior, h_weight, s.eval);
    const AucResult auc = auc_mann_whitney(data);

    json j;
    j["name"] = col.name;
    j["n0"] = data.count(0);
    j["n1"] = data.count(1);
    j["h"] = to_json(h);
    j["auc"] = to_json(auc);
    j["l_a_substitution"] = l_a_by_weight_substitution(data);
    j["rank_uniform_auc"] = rank_uniform_evaluation(data);

    json indep = json::array();
    for (std::size_t i = 0; i < s.u.size(); ++i)
        indep.push_back({{"u", s.u_labels[i]}, {"loss", independent_threshold_loss(data, priors, weight, s.u[i])}});
    j["independent_threshold"] = indep;

    json screening = json::array();
    for (double p : s.screen)
        for (auto basis : {ScreeningBasis::all_objects, ScreeningBasis::class0_objects})
            screening.push_back(to_json(screen_at_proportion(data, p, basis)));
    j["screening"] = screening;

    std::vector<std::string> warns = h.warnings;
    const bool inverted = auc.auc < 0.5;
    if (inverted)
        warns.emplace_back("auc_below_half_labels_may_be_inverted");
    if (s.normalization != Normalization::reject)
        warns.push_back("scores_normalized_" + std::string(to_string(s.normalization)));
    j["diagnostics"] = {{"auc_below_half", inverted}, {"suggest_label_inversion", inverted}};
    j["warnings"] = warns;
    return j;
}

inline std::vector<const io::ScoreColumn*> select_columns(const io::ScoreTable& table,
                                                          const std::vector<std::string>& names) {
    std::vector<const io::ScoreColumn*> out;
    if (names.empty()) {
        for (const auto& c : table.columns)
            out.push_back(&c);
        return out;
    }
    for (const auto& n : names) {
        const auto it = std::find_if(table.columns.begin(), table.columns.end(),
                                     [&](const io::ScoreColumn& c) { return c.name == n; });
        if (it == table.columns.end())
            throw ConfigError("no score column named '" + n + "' in the input");
        out.push_back(&*it);
    }
    return out;
}

inline void require_two_classes(const io::ScoreTable& table) {
    const auto ones = std::count(table.labels.begin(), table.labels.end(), 1);
    if (ones == 0 || ones == static_cast<std::ptrdiff_t>(table.rows()))
        throw DegenerateDataError("input contains a single class (" + std::to_string(table.rows()) +
                                  " rows, all labelled " + std::to_string(table.labels.front()) + ")");
}

/// Ranking by a metric, best first. Ties keep column order.
inline std::vector<std::string> ranking(const json& columns, const char* group, const char* field) {
    std::vector<std::size_t> idx(columns.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return columns[a][group][field].get<double>() > columns[b][group][field].get<double>();
    });
    std::vector<std::string> out;
    for (auto i : idx)
        out.push_back(columns[i]["name"].get<std::string>());
    return out;
}

/// Full JSON report for evaluate and compare.
inline json build_report(const Settings& s, const io::ScoreTable& table, const std::string& input_path,
                         const std::vector<std::string>& column_names) {
    require_two_classes(table);
    const auto cols = select_columns(table, column_names);
    if (s.command == "compare" && cols.size() < 2)
        throw ConfigError("compare needs at least two score columns");

    const ClassPriors priors = point_priors(s.prior, table);
    const WeightFunction weight = shared_weight(s.weight, priors);

    Settings per_column = s;
    const bool concurrent = s.threads > 1 && cols.size() > 1;
    if (concurrent)
        per_column.eval.workers = std::max(1u, s.threads / static_cast<unsigned>(cols.size()));

    json results = json::array();
    if (concurrent) {
        std::vector<std::future<json>> pending;
        for (const auto* c : cols)
            pending.push_back(std::async(std::launch::async, [&, c] {
                return evaluate_column(*c, table, per_column, priors, weight);
            }));
        for (auto& f : pending)
            results.push_back(f.get());
    } else {
        for (const auto* c : cols)
            results.push_back(evaluate_column(*c, table, per_column, priors, weight));
    }

    json report;
    report["schema_version"] = std::string(schema_version);
    report["tool"] = {{"name", std::string(tool_name)}, {"version", std::string(hmeasure::version)}};
    report["command"] = s.command;
    report["generated_at"] = detail::utc_timestamp();
    std::vector<std::string> names;
    for (const auto* c : cols)
        names.push_back(c->name);
    report["provenance"] = {{"config", s.echo()},
                            {"input", {{"path", input_path}, {"rows", table.rows()}, {"score_columns", names}}},
                            {"data_fingerprint", "fnv1a64:" + detail::hex64(io::fingerprint(table))}};
    report["columns"] = results;

    if (s.command == "compare") {
        json cmp;
        cmp["shared_weight"] = s.prior.is_distributed() ? results[0]["h"]["weight_used"].get<std::string>()
                                                         : weight.describe();
        cmp["shared_prior"] = results[0]["h"]["prior_used"];
        cmp["ranking_by_h"] = ranking(results, "h", "h");
        cmp["ranking_by_auc"] = ranking(results, "auc", "auc");
        json discordant = json::array();
        for (std::size_t a = 0; a < results.size(); ++a)
            for (std::size_t b = a + 1; b < results.size(); ++b) {
                const double dh = results[a]["h"]["h"].get<double>() - results[b]["h"]["h"].get<double>();
                const double da = results[a]["auc"]["auc"].get<double>() - results[b]["auc"]["auc"].get<double>();
                if (dh * da < 0.0)
                    discordant.push_back({results[a]["name"], results[b]["name"]});
            }
        cmp["rank_disagreement"] = !discordant.empty();
        cmp["discordant_pairs"] = discordant;
        report["comparison"] = cmp;
    }
    return report;
}

inline void write_csv(const std::filesystem::path& path, const char* header, const std::vector<double>& x,
                      const std::vector<double>& y) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    out.precision(17);
    out << header << '\n';
    for (std::size_t i = 0; i < x.size(); ++i)
        out << x[i] << ',' << y[i] << '\n';
}

/// loss_curve.csv, weight.csv and roc.csv for one score column.
inline std::vector<std::filesystem::path> write_curves(const Settings& s, const io::ScoreTable& table,
                                                       const std::string& column, const std::filesystem::path& dir) {
    require_two_classes(table);
    const io::ScoreColumn& col =
        column.empty() ? table.columns.front() : *select_columns(table, {column}).front();
    const LabeledScores data = column_data(col, table, s.normalization);
    const ClassPriors priors = point_priors(s.prior, table);
    const WeightFunction weight = shared_weight(s.weight, priors);
    const EmpiricalCdfPair cdfs(data);

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());

    const LossCurve curve = loss_curve(priors, cdfs, s.eval.mode, s.resolution);
    std::vector<double> density;
    density.reserve(curve.grid.size());
    for (double c : curve.grid)
        density.push_back(weight.density(c));

    // ROC from the lowest threshold (everything above: (1, 1)) upwards.
    std::vector<double> fpr{1.0}, tpr{1.0};
    for (const auto& st : cdfs.steps()) {
        fpr.push_back(1.0 - st.f0);
        tpr.push_back(1.0 - st.f1);
    }

    const std::vector<std::filesystem::path> files{dir / "loss_curve.csv", dir / "weight.csv", dir / "roc.csv"};
    write_csv(files[0], "c,min_loss", curve.grid, curve.loss);
    write_csv(files[1], "c,density", curve.grid, density);
    write_csv(files[2], "fpr,tpr", fpr, tpr);
    return files;
}

inline void add_common_options(CLI::App& sub, Options& o) {
    sub.add_option("input", o.input, "CSV with a 'label' column and score columns")->required();
    sub.add_option("--weight", o.weight, "default | uniform | beta[:a,b] | tabulated:path");
    sub.add_option("--alpha", o.alpha, "first shape of --weight beta");
    sub.add_option("--beta", o.beta, "second shape of --weight beta");
    sub.add_option("--prior", o.prior, "empirical | fixed[:pi0] | beta[:a,b]");
    sub.add_option("--pi0", o.pi0, "class-0 prior for --prior fixed");
    sub.add_option("--mode", o.mode, "calibrated | optimal");
    sub.add_option("--method", o.method, "quadrature | monte_carlo");
    sub.add_option("--reference", o.reference, "quadrature | closed_form");
    sub.add_option("--resolution", o.resolution, "grid size for curves (>= 1024)");
    sub.add_option("--mc-samples", o.mc_samples, "cost draws per Monte Carlo estimate");
    sub.add_option("--outer-samples", o.outer_samples, "prior draws for --prior beta");
    sub.add_option("--seed", o.seed, "64-bit seed, required for any Monte Carlo path");
    sub.add_option("--normalize", o.normalize, "reject | minmax | logistic");
    sub.add_option("--threads", o.threads, "worker threads");
}

inline void add_report_options(CLI::App& sub, Options& o) {
    sub.add_option("--screen", o.screen, "screening proportions p[,p...]")->delimiter(',');
    sub.add_option("--u-dist", o.u_dist, "threshold distributions: point:t | mixture | rank1 | tabulated:path [,...]")
        ->delimiter(',');
    sub.add_option("--out", o.out, "report path (default: stdout)");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"H-measure and related classifier performance metrics", std::string(tool_name)};
    app.set_version_flag("--version", std::string(hmeasure::version));
    app.require_subcommand(1);

    auto* evaluate = app.add_subcommand("evaluate", "metrics for every score column");
    add_common_options(*evaluate, o);
    add_report_options(*evaluate, o);
    evaluate->add_option("--columns", o.columns, "score columns to evaluate (default: all)")->delimiter(',');

    auto* compare = app.add_subcommand("compare", "metrics and rankings under one shared weight");
    add_common_options(*compare, o);
    add_report_options(*compare, o);
    compare->add_option("--columns", o.columns, "score columns to compare (default: all)")->delimiter(',');

    auto* curves = app.add_subcommand("curves", "plot data: loss curve, weight density, ROC");
    add_common_options(*curves, o);
    curves->add_option("--out", o.out, "output directory")->required();
    curves->add_option("--column", o.column, "score column (default: first)");

    auto& log = detail::logger();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::config;
    }
    o.command = evaluate->parsed() ? "evaluate" : compare->parsed() ? "compare" : "curves";

    try {
        const Settings s = resolve(o);
        const io::ScoreTable table = io::read_score_table(o.input);
        log.info("read {} rows, {} score columns from {}", table.rows(), table.columns.size(), o.input);

        if (o.command == "curves") {
            for (const auto& f : write_curves(s, table, o.column, o.out))
                log.info("wrote {}", f.string());
            return exit_code::ok;
        }
        const json report = build_report(s, table, o.input, o.columns);
        if (o.out.empty()) {
            out << report.dump(2) << '\n';
        } else {
            std::ofstream f(o.out);
            if (!f)
                throw ConfigError("cannot write report to '" + o.out + "'");
            f << report.dump(2) << '\n';
            log.info("wrote {}", o.out);
        }
        return exit_code::ok;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::input;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const DegenerateDataError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::degenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::failure;
    }
}

} // namespace hmeasure::cli

#include "infogeo/jobs.hpp"

#include "infogeo/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace infogeo::cli {

namespace {

json vec_to_json(const Vec& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json mat_to_json(const Mat& m) {
    json out = json::array();
    for (int i = 0; i < m.rows(); ++i) out.push_back(vec_to_json(m.row(i).transpose()));
    return out;
}

Vec vec_from_json(const json& j, const std::string& field) {
    if (j.is_number()) {
        return Vec::Constant(1, j.get<double>());
    }
    if (!j.is_array() || j.empty()) {
        throw ConfigError("field '" + field + "' must be a nonempty array of numbers");
    }
    Vec v(static_cast<int>(j.size()));
    int i = 0;
    for (const auto& el : j) {
        if (!el.is_number()) {
            throw ConfigError("field '" + field + "' must contain numbers only");
        }
        v(i++) = el.get<double>();
    }
    return v;
}

Mat mat_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("field '" + field + "' must be a nonempty array of rows");
    }
    const int rows = static_cast<int>(j.size());
    Vec first = vec_from_json(j.at(0), field);
    Mat m(rows, first.size());
    m.row(0) = first.transpose();
    for (int i = 1; i < rows; ++i) {
        Vec row = vec_from_json(j.at(i), field);
        if (row.size() != m.cols()) {
            throw ConfigError("field '" + field + "' has rows of unequal length");
        }
        m.row(i) = row.transpose();
    }
    return m;
}

const json& require_field(const json& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) {
        throw ConfigError("missing required config field '" + key + "'");
    }
    return *it;
}

// Setup-phase guard: invalid config values surface as library domain or
// contract errors; during resolution those are the user's problem, not a
// numeric failure.
template <typename Fn>
auto resolving(const std::string& what, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError(what + ": " + e.what());
    } catch (const ContractViolation& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

Generator parse_generator(const json& cfg, json& resolved) {
    const json& g = require_field(cfg, "generator");
    if (!g.is_object()) throw ConfigError("'generator' must be an object");
    if (!require_field(g, "kind").is_string()) {
        throw ConfigError("'generator.kind' must be a string");
    }
    const std::string kind = g.at("kind").get<std::string>();
    json echo;
    echo["kind"] = kind;
    if (kind == "kl") {
        resolved["generator"] = echo;
        return Generator::kl();
    }
    if (kind == "euclidean") {
        resolved["generator"] = echo;
        return Generator::euclidean();
    }
    if (kind == "qlog") {
        double q = 1.0;
        if (g.contains("q")) {
            if (!g.at("q").is_number()) throw ConfigError("'generator.q' must be a number");
            q = g.at("q").get<double>();
        }
        echo["q"] = q;
        resolved["generator"] = echo;
        return resolving("generator",
                         [&] { return generator_from_deformed_log(DeformedLog::power(q)); });
    }
    throw ConfigError("unknown generator kind '" + kind + "' (expected kl, euclidean, or qlog)");
}

std::optional<ParamBox> parse_domain(const json& m) {
    if (!m.contains("domain")) return std::nullopt;
    const json& d = m.at("domain");
    if (!d.is_object()) throw ConfigError("'manifold.domain' must be an object with lo and hi");
    Vec lo = vec_from_json(require_field(d, "lo"), "manifold.domain.lo");
    Vec hi = vec_from_json(require_field(d, "hi"), "manifold.domain.hi");
    return resolving("manifold.domain", [&] { return ParamBox(lo, hi); });
}

ModelManifold parse_manifold(const json& cfg, json& resolved) {
    const json& m = require_field(cfg, "manifold");
    if (!m.is_object()) throw ConfigError("'manifold' must be an object");
    if (!require_field(m, "kind").is_string()) {
        throw ConfigError("'manifold.kind' must be a string");
    }
    const std::string kind = m.at("kind").get<std::string>();

    BuiltinManifoldSpec spec;
    json echo;
    echo["kind"] = kind;

    if (kind == "exponential" || kind == "q_exponential") {
        const Mat Q = mat_from_json(require_field(m, "questions"), "manifold.questions");
        std::vector<Question> questions;
        for (int k = 0; k < Q.rows(); ++k) {
            resolving("manifold.questions",
                      [&] { questions.emplace_back(Vec(Q.row(k).transpose())); return 0; });
        }
        if (m.contains("n") && m.at("n").get<int>() != Q.cols()) {
            throw ConfigError("'manifold.n' contradicts the question length");
        }
        std::optional<ParamBox> box = parse_domain(m);
        if (kind == "exponential") {
            spec = BuiltinManifoldSpec::exponential(std::move(questions), std::move(box));
        } else {
            double q = 1.0;
            if (m.contains("q")) {
                if (!m.at("q").is_number()) throw ConfigError("'manifold.q' must be a number");
                q = m.at("q").get<double>();
            }
            echo["q"] = q;
            spec = BuiltinManifoldSpec::q_exponential(std::move(questions), q, std::move(box));
        }
        echo["questions"] = mat_to_json(Q);
        echo["n"] = Q.cols();
    } else if (kind == "curved_polynomial") {
        if (m.contains("coefficients")) {
            const Mat C = mat_from_json(m.at("coefficients"), "manifold.coefficients");
            std::optional<ParamBox> box = parse_domain(m);
            if (!box) {
                throw ConfigError("custom curved_polynomial coefficients need an explicit domain");
            }
            const int n = m.contains("n") ? m.at("n").get<int>() : static_cast<int>(C.rows()) + 1;
            spec = BuiltinManifoldSpec::curved_polynomial(C, n, *box);
            echo["coefficients"] = mat_to_json(C);
            echo["n"] = n;
        } else {
            spec = BuiltinManifoldSpec::curved_polynomial();
            if (auto box = parse_domain(m)) spec.domain = *box;
            echo["coefficients"] = mat_to_json((Mat(2, 3) << 0, 1, 0, 0, 0, 1).finished());
            echo["n"] = 3;
        }
    } else {
        throw ConfigError("unknown manifold kind '" + kind + "'");
    }

    ModelManifold manifold = resolving("manifold", [&] { return make_manifold(spec); });
    echo["domain"] = {{"lo", vec_to_json(manifold.domain().lo)},
                      {"hi", vec_to_json(manifold.domain().hi)}};
    resolved["manifold"] = echo;
    return manifold;
}

Distribution parse_point(const json& cfg, const std::string& key, const ModelManifold& manifold,
                         json& resolved) {
    const Vec w = vec_from_json(require_field(cfg, key), key);
    if (w.size() != manifold.alphabet().size()) {
        throw ConfigError("'" + key + "' length differs from the manifold alphabet size");
    }
    resolved[key] = vec_to_json(w);
    return resolving("'" + key + "'", [&] { return Distribution(w); });
}

Vec parse_param(const json& cfg, const std::string& key, const ModelManifold& manifold,
                json& resolved) {
    const Vec theta = vec_from_json(require_field(cfg, key), key);
    if (theta.size() != manifold.param_dim()) {
        throw ConfigError("'" + key + "' length differs from the manifold parameter dimension");
    }
    if (!manifold.domain().contains(theta)) {
        throw ConfigError("'" + key + "' lies outside the manifold domain");
    }
    resolved[key] = vec_to_json(theta);
    return theta;
}

struct SamplerConfig {
    int n_samples = 100;
    double radius = 0.05;
    std::uint64_t seed = kDefaultSeed;
};

SamplerConfig parse_sampler(const json& cfg, json& resolved) {
    SamplerConfig s;
    if (cfg.contains("sampler")) {
        const json& j = cfg.at("sampler");
        if (!j.is_object()) throw ConfigError("'sampler' must be an object");
        if (j.contains("n_samples")) {
            s.n_samples = j.at("n_samples").get<int>();
            if (s.n_samples < 1) throw ConfigError("'sampler.n_samples' must be positive");
        }
        if (j.contains("radius")) {
            s.radius = j.at("radius").get<double>();
            if (!(s.radius > 0.0)) throw ConfigError("'sampler.radius' must be positive");
        }
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    }
    resolved["sampler"] = {{"n_samples", s.n_samples}, {"radius", s.radius}, {"seed", s.seed}};
    return s;
}

double parse_threshold(const json& cfg, const std::string& key, double fallback, json& resolved) {
    double value = fallback;
    if (cfg.contains("thresholds")) {
        const json& t = cfg.at("thresholds");
        if (!t.is_object()) throw ConfigError("'thresholds' must be an object");
        if (t.contains(key)) {
            value = t.at(key).get<double>();
            if (!(value > 0.0)) throw ConfigError("'thresholds." + key + "' must be positive");
        }
    }
    resolved["thresholds"][key] = value;
    return value;
}

SolverOptions solver_for(const SamplerConfig& sampler) {
    SolverOptions opts;
    opts.seed = sampler.seed;
    return opts;
}

json projection_to_json(const ProjectionResult& res) {
    return {{"theta_star", vec_to_json(res.theta_star)},
            {"m_star", vec_to_json(res.m_star.weights())},
            {"divergence", res.divergence_at_min},
            {"gradient_norm", res.gradient_norm},
            {"converged", res.converged},
            {"multistart_agreement", res.multistart_agreement},
            {"iterations", res.iterations}};
}

json run_project(const json& cfg, json& resolved) {
    const Generator gen = parse_generator(cfg, resolved);
    const ModelManifold manifold = parse_manifold(cfg, resolved);
    const Distribution x = parse_point(cfg, "x", manifold, resolved);
    const SamplerConfig sampler = parse_sampler(cfg, resolved);
    return projection_to_json(project(gen, manifold, x, solver_for(sampler)));
}

json run_fisher(const json& cfg, json& resolved) {
    const Generator gen = parse_generator(cfg, resolved);
    const ModelManifold manifold = parse_manifold(cfg, resolved);

    if (cfg.contains("grid")) {
        const Mat grid = mat_from_json(cfg.at("grid"), "grid");
        if (grid.cols() != manifold.param_dim()) {
            throw ConfigError("'grid' rows must match the manifold parameter dimension");
        }
        resolved["grid"] = mat_to_json(grid);
        json rows = json::array();
        for (int i = 0; i < grid.rows(); ++i) {
            const Vec theta = grid.row(i).transpose();
            if (!manifold.domain().contains(theta)) {
                throw ConfigError("'grid' contains a point outside the manifold domain");
            }
            const FisherMatrix I = fisher_bregman(gen, manifold, theta);
            rows.push_back({{"theta", vec_to_json(theta)}, {"matrix", mat_to_json(I.matrix)}});
        }
        return {{"grid", rows}};
    }

    const Vec theta = parse_param(cfg, "theta", manifold, resolved);
    const FisherMatrix closed = fisher_bregman(gen, manifold, theta);
    const FisherMatrix numeric = fisher_numeric(gen, manifold, manifold.forward(theta), theta);
    return {{"theta", vec_to_json(theta)},
            {"closed_form", mat_to_json(closed.matrix)},
            {"numeric", mat_to_json(numeric.matrix)},
            {"eigenvalues", vec_to_json(closed.eigenvalues())}};
}

json run_model_div(const json& cfg, json& resolved) {
    const Generator gen = parse_generator(cfg, resolved);
    const ModelManifold manifold = parse_manifold(cfg, resolved);
    const Vec theta = parse_param(cfg, "theta", manifold, resolved);
    const Vec eta = parse_param(cfg, "eta", manifold, resolved);
    bool crosscheck = false;
    if (cfg.contains("crosscheck")) {
        if (!cfg.at("crosscheck").is_boolean()) {
            throw ConfigError("'crosscheck' must be a boolean");
        }
        crosscheck = cfg.at("crosscheck").get<bool>();
    }
    resolved["crosscheck"] = crosscheck;
    if (!crosscheck) {
        return {{"divergence", model_divergence(gen, manifold, theta, eta)}};
    }
    const SamplerConfig sampler = parse_sampler(cfg, resolved);
    CrosscheckOptions opts;
    opts.n_samples = sampler.n_samples;
    opts.radius = sampler.radius;
    opts.seed = sampler.seed;
    opts.solver = solver_for(sampler);
    const CrosscheckOutcome outcome = model_divergence_crosschecked(gen, manifold, theta, eta, opts);
    return {{"divergence", outcome.divergence},
            {"crosscheck",
             {{"min_sampled", outcome.min_sampled}, {"n_verified", outcome.n_verified}}}};
}

json run_fiber_sample(const json& cfg, json& resolved) {
    const Generator gen = parse_generator(cfg, resolved);
    const ModelManifold manifold = parse_manifold(cfg, resolved);
    const Vec theta = parse_param(cfg, "theta", manifold, resolved);
    const SamplerConfig sampler = parse_sampler(cfg, resolved);

    const FiberDescription desc = fiber_description(gen, manifold, theta);
    const FiberSample sample = sample_fiber(desc, gen, manifold, sampler.n_samples,
                                            sampler.radius, sampler.seed, solver_for(sampler));
    json points = json::array();
    json verified = json::array();
    json projected = json::array();
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        points.push_back(vec_to_json(sample.points[i].weights()));
        verified.push_back(static_cast<bool>(sample.verified[i]));
        projected.push_back(vec_to_json(sample.projected_theta[i]));
    }
    return {{"anchor", vec_to_json(desc.anchor.weights())},
            {"fiber_dim", desc.dim()},
            {"achieved_rank", desc.achieved_rank},
            {"degenerate", desc.degenerate},
            {"radius_used", sample.radius},
            {"n_verified", sample.n_verified()},
            {"points", points},
            {"verified", verified},
            {"projected_theta", projected}};
}

json run_check_constancy(const json& cfg, json& resolved) {
    const Generator gen = parse_generator(cfg, resolved);
    const ModelManifold manifold = parse_manifold(cfg, resolved);
    const Vec theta = parse_param(cfg, "theta", manifold, resolved);
    const SamplerConfig sampler = parse_sampler(cfg, resolved);

    ConstancyOptions opts;
    opts.n_samples = sampler.n_samples;
    opts.radius = sampler.radius;
    opts.seed = sampler.seed;
    opts.solver = solver_for(sampler);
    opts.threshold = parse_threshold(cfg, "constancy", opts.threshold, resolved);

    const ConstancyReport report = check_fiber_constancy(gen, manifold, theta, opts);
    return {{"spread", report.max_relative_spread},
            {"n_points", report.n_points},
            {"constant", report.constant},
            {"vacuous", report.vacuous},
            {"threshold", report.threshold},
            {"reference", mat_to_json(report.reference.matrix)},
            {"bregman_agreement", report.bregman_agreement}};
}

json run_check_pythagorean(const json& cfg, json& resolved) {
    const Generator gen = parse_generator(cfg, resolved);
    const ModelManifold manifold = parse_manifold(cfg, resolved);
    const Distribution x = parse_point(cfg, "x", manifold, resolved);
    const Vec theta = parse_param(cfg, "theta", manifold, resolved);
    const Vec eta = parse_param(cfg, "eta", manifold, resolved);
    const SamplerConfig sampler = parse_sampler(cfg, resolved);
    const double membership = parse_threshold(cfg, "membership", 1e-6, resolved);

    const PythagoreanReport report =
        check_pythagorean(gen, manifold, x, theta, eta, membership, solver_for(sampler));
    return {{"d_x_theta", report.d_x_theta},
            {"d_theta_eta", report.d_theta_eta},
            {"d_x_eta", report.d_x_eta},
            {"residual", report.residual}};
}

json run_check_affine(const json& cfg, json& resolved) {
    const Generator gen = parse_generator(cfg, resolved);
    const ModelManifold manifold = parse_manifold(cfg, resolved);
    const SamplerConfig sampler = parse_sampler(cfg, resolved);
    const double rank_tol = parse_threshold(cfg, "rank_tol", 1e-8, resolved);

    const int d = manifold.param_dim();
    Mat grid;
    if (cfg.contains("grid")) {
        grid = mat_from_json(cfg.at("grid"), "grid");
        if (grid.cols() != d) {
            throw ConfigError("'grid' rows must match the manifold parameter dimension");
        }
        for (int i = 0; i < grid.rows(); ++i) {
            if (!manifold.domain().contains(grid.row(i).transpose())) {
                throw ConfigError("'grid' contains a point outside the manifold domain");
            }
        }
    } else {
        const int G = std::max(12, 2 * (d + 2));
        const ParamBox inner = manifold.domain().shrunk(0.1);
        grid = Mat(G, d);
        if (d == 1) {
            for (int i = 0; i < G; ++i) {
                grid(i, 0) = inner.lo(0) + (inner.hi(0) - inner.lo(0)) * i / (G - 1.0);
            }
        } else {
            const std::vector<Vec> pts = halton_points(G, inner.lo, inner.hi, sampler.seed);
            for (int i = 0; i < G; ++i) grid.row(i) = pts[i].transpose();
        }
    }
    resolved["grid"] = mat_to_json(grid);

    const AffineLogMapReport report = check_affine_logmap(gen, manifold, grid, rank_tol);
    return {{"singular_values", vec_to_json(report.singular_values)},
            {"effective_rank", report.effective_rank},
            {"affine", report.affine},
            {"rank_tol", report.rank_tol},
            {"grid_size", static_cast<int>(grid.rows())}};
}

json run_check_second_deriv(const json& cfg, json& resolved) {
    const Generator gen = parse_generator(cfg, resolved);
    const ModelManifold manifold = parse_manifold(cfg, resolved);
    const Vec theta = parse_param(cfg, "theta", manifold, resolved);
    const double threshold = parse_threshold(cfg, "second_deriv", 1e-5, resolved);

    Reparametrization rep = Reparametrization::identity(manifold.domain());
    json rep_echo{{"kind", "identity"}};
    if (cfg.contains("reparam")) {
        const json& r = cfg.at("reparam");
        if (!r.is_object() || !r.contains("kind") || !r.at("kind").is_string()) {
            throw ConfigError("'reparam' must be an object with a string 'kind'");
        }
        const std::string kind = r.at("kind").get<std::string>();
        rep_echo["kind"] = kind;
        if (kind == "identity") {
            // default already built
        } else if (kind == "logit") {
            rep = resolving("reparam", [&] {
                return Reparametrization::logit(manifold.domain());
            });
        } else if (kind == "scaling") {
            const double scale = require_field(r, "scale").get<double>();
            rep_echo["scale"] = scale;
            rep = resolving("reparam", [&] {
                return Reparametrization::scaling(manifold.domain(), scale);
            });
        } else if (kind == "quadratic2d") {
            const double c = require_field(r, "c").get<double>();
            rep_echo["c"] = c;
            rep = resolving("reparam", [&] {
                return Reparametrization::quadratic2d(manifold.domain(), c);
            });
        } else {
            throw ConfigError("unknown reparam kind '" + kind + "'");
        }
    }
    resolved["reparam"] = rep_echo;

    const SecondDerivReport report =
        check_second_derivative_criterion(gen, manifold, rep, theta, {}, threshold);
    return {{"max_relative_deviation", report.max_relative_deviation},
            {"independent", report.independent},
            {"threshold", report.threshold},
            {"eta0", vec_to_json(report.eta0)}};
}

json run_catalog() {
    return {{"generators",
             {{{"kind", "kl"}, {"description", "F(u) = u ln u; Kullback-Leibler divergence"}},
              {{"kind", "euclidean"}, {"description", "F(u) = u^2; squared Euclidean distance"}},
              {{"kind", "qlog"},
               {"description", "deformed logarithm with phi(v) = v^q; q = 1 recovers kl"},
               {"parameters", {"q"}}}}},
            {"manifolds",
             {{{"kind", "exponential"},
               {"description", "softmax family exp(sum_k theta^k q_k) / Z over given questions"}},
              {{"kind", "q_exponential"},
               {"description", "deformed-exponential family, sum-normalized"},
               {"parameters", {"q"}}},
              {{"kind", "curved_polynomial"},
               {"description",
                "one-parameter curved family with polynomial weights; defaults to "
                "(theta, theta^2, 1 - theta - theta^2)"}}}}};
}

void flatten(const json& node, const std::string& prefix, std::vector<std::string>& keys,
             std::map<std::string, std::string>& values) {
    if (node.is_object()) {
        for (const auto& [key, child] : node.items()) {
            flatten(child, prefix.empty() ? key : prefix + "." + key, keys, values);
        }
    } else if (node.is_array()) {
        int i = 0;
        for (const auto& child : node) {
            flatten(child, prefix + "." + std::to_string(i++), keys, values);
        }
    } else {
        keys.push_back(prefix);
        values[prefix] = node.dump();
    }
}

} // namespace

json run_command(const std::string& command, const json& config, bool with_timings) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!config.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    json resolved = json::object();
    json result;
    if (command == "project") {
        result = run_project(config, resolved);
    } else if (command == "fisher") {
        result = run_fisher(config, resolved);
    } else if (command == "model-div") {
        result = run_model_div(config, resolved);
    } else if (command == "fiber-sample") {
        result = run_fiber_sample(config, resolved);
    } else if (command == "check-constancy") {
        result = run_check_constancy(config, resolved);
    } else if (command == "check-pythagorean") {
        result = run_check_pythagorean(config, resolved);
    } else if (command == "check-affine") {
        result = run_check_affine(config, resolved);
    } else if (command == "check-second-deriv") {
        result = run_check_second_deriv(config, resolved);
    } else if (command == "catalog") {
        result = run_catalog();
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }

    json report;
    report["config"] = resolved;
    report["result"] = result;
    report["version"] = kVersion;
    if (with_timings) {
        const auto t1 = std::chrono::steady_clock::now();
        report["duration_ms"] =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count();
    }
    return report;
}

std::string report_to_csv(const json& report) {
    const json& result = report.at("result");
    std::ostringstream out;

    // Grid sweeps become one row per grid entry; everything else flattens
    // to key,value lines. Scalar cells reuse the JSON serialization so the
    // two formats carry byte-identical numbers.
    if (result.is_object() && result.contains("grid") && result.at("grid").is_array() &&
        !result.at("grid").empty() && result.at("grid").front().is_object()) {
        std::vector<std::string> header;
        std::map<std::string, std::string> first_row;
        flatten(result.at("grid").front(), "", header, first_row);
        for (std::size_t i = 0; i < header.size(); ++i) {
            out << (i ? "," : "") << header[i];
        }
        out << "\n";
        for (const auto& entry : result.at("grid")) {
            std::vector<std::string> keys;
            std::map<std::string, std::string> values;
            flatten(entry, "", keys, values);
            for (std::size_t i = 0; i < header.size(); ++i) {
                out << (i ? "," : "") << values[header[i]];
            }
            out << "\n";
        }
        return out.str();
    }

    std::vector<std::string> keys;
    std::map<std::string, std::string> values;
    flatten(result, "", keys, values);
    out << "key,value\n";
    for (const std::string& key : keys) {
        out << key << "," << values[key] << "\n";
    }
    return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("write_atomic: failed writing " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

namespace {

struct LeafFlags {
    CLI::Option* seed = nullptr;
    CLI::Option* threshold = nullptr;
};

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"information-geometry toolkit: divergences, projections, Fisher matrices, "
                 "fibers, and exponential-family criteria on finite simplexes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::string grid_flag;
    bool timings = false;
    std::uint64_t seed_value = kDefaultSeed;
    double threshold_value = 0.0;
    std::map<const CLI::App*, LeafFlags> flags;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", config_path, "path to the JSON job config");
        if (config_required) c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "write the report to this path instead of stdout");
        sub->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--timings", timings, "embed wall-clock duration in the report");
        flags[sub].seed =
            sub->add_option("--seed", seed_value, "override the sampler seed from the config");
    };

    CLI::App* project_cmd = app.add_subcommand("project", "project a data point onto the model");
    CLI::App* fisher_cmd = app.add_subcommand("fisher", "Fisher information matrix at a parameter");
    CLI::App* model_div_cmd =
        app.add_subcommand("model-div", "divergence between two model points");
    CLI::App* fiber_cmd =
        app.add_subcommand("fiber-sample", "sample and verify points of a projection fiber");
    CLI::App* check_cmd = app.add_subcommand("check", "exponential-family criteria");
    check_cmd->require_subcommand(1);
    CLI::App* constancy_cmd =
        check_cmd->add_subcommand("constancy", "Fisher-matrix constancy along a fiber");
    CLI::App* pythagorean_cmd =
        check_cmd->add_subcommand("pythagorean", "Pythagorean divergence relation");
    CLI::App* affine_cmd =
        check_cmd->add_subcommand("affine", "rank test for an affine logarithmic map");
    CLI::App* second_cmd = check_cmd->add_subcommand(
        "second-deriv", "symbol-independence of logarithmic-map second derivatives");
    CLI::App* catalog_cmd =
        app.add_subcommand("catalog", "list builtin generators and manifold kinds");

    for (CLI::App* sub : {project_cmd, fisher_cmd, model_div_cmd, fiber_cmd, constancy_cmd,
                          pythagorean_cmd, affine_cmd, second_cmd}) {
        add_common(sub, true);
    }
    add_common(catalog_cmd, false);
    fisher_cmd->add_option("--grid", grid_flag,
                           "1-d parameter sweep 'theta=start:stop:count' (closed-form rows)");
    for (CLI::App* sub : {constancy_cmd, pythagorean_cmd, affine_cmd, second_cmd}) {
        flags[sub].threshold = sub->add_option(
            "--threshold", threshold_value, "override the command's verdict threshold");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string command;
    const CLI::App* leaf = nullptr;
    if (project_cmd->parsed()) { command = "project"; leaf = project_cmd; }
    else if (fisher_cmd->parsed()) { command = "fisher"; leaf = fisher_cmd; }
    else if (model_div_cmd->parsed()) { command = "model-div"; leaf = model_div_cmd; }
    else if (fiber_cmd->parsed()) { command = "fiber-sample"; leaf = fiber_cmd; }
    else if (catalog_cmd->parsed()) { command = "catalog"; leaf = catalog_cmd; }
    else if (check_cmd->parsed()) {
        if (constancy_cmd->parsed()) { command = "check-constancy"; leaf = constancy_cmd; }
        else if (pythagorean_cmd->parsed()) { command = "check-pythagorean"; leaf = pythagorean_cmd; }
        else if (affine_cmd->parsed()) { command = "check-affine"; leaf = affine_cmd; }
        else { command = "check-second-deriv"; leaf = second_cmd; }
    }

    json config = json::object();
    json report;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file " + config_path);
            config = json::parse(in);
        }
        if (!config.is_object()) throw ConfigError("config must be a JSON object");

        if (flags[leaf].seed && flags[leaf].seed->count() > 0) {
            config["sampler"]["seed"] = seed_value;
        }
        if (flags[leaf].threshold && flags[leaf].threshold->count() > 0) {
            static const std::map<std::string, std::string> threshold_key{
                {"check-constancy", "constancy"},
                {"check-pythagorean", "membership"},
                {"check-affine", "rank_tol"},
                {"check-second-deriv", "second_deriv"}};
            config["thresholds"][threshold_key.at(command)] = threshold_value;
        }
        if (!grid_flag.empty()) {
            const auto eq = grid_flag.find('=');
            const auto c1 = grid_flag.find(':');
            const auto c2 = grid_flag.find(':', c1 + 1);
            if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos ||
                grid_flag.substr(0, eq) != "theta") {
                throw ConfigError("--grid expects theta=start:stop:count");
            }
            double start = 0.0, stop = 0.0;
            int count = 0;
            try {
                start = std::stod(grid_flag.substr(eq + 1, c1 - eq - 1));
                stop = std::stod(grid_flag.substr(c1 + 1, c2 - c1 - 1));
                count = std::stoi(grid_flag.substr(c2 + 1));
            } catch (const std::exception&) {
                throw ConfigError("--grid expects numeric start:stop:count");
            }
            if (count < 1) throw ConfigError("--grid count must be positive");
            json grid = json::array();
            for (int i = 0; i < count; ++i) {
                const double t =
                    (count == 1) ? start : start + (stop - start) * i / (count - 1.0);
                grid.push_back(json::array({t}));
            }
            config["grid"] = grid;
        }

        const auto t0 = std::chrono::steady_clock::now();
        report = run_command(command, config, timings);
        const auto t1 = std::chrono::steady_clock::now();
        std::cerr << "duration_ms "
                  << std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                         .count()
                  << "\n";
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        json partial{{"config", config}, {"error", e.what()}, {"version", kVersion}};
        if (const auto* solver_err = dynamic_cast<const SolverError*>(&e)) {
            partial["best"] = projection_to_json(solver_err->best);
        }
        const std::string text = partial.dump(2) + "\n";
        if (!out_path.empty()) {
            try {
                write_atomic(out_path, text);
            } catch (const std::exception& io) {
                std::cerr << "error: " << io.what() << "\n";
            }
        } else {
            std::cout << text;
        }
        return 3;
    }

    const std::string text =
        (format == "csv") ? report_to_csv(report) : report.dump(2) + "\n";
    if (!out_path.empty()) {
        try {
            write_atomic(out_path, text);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
    } else {
        std::cout << text;
    }
    return 0;
}

} // namespace infogeo::cli

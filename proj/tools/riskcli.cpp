// riskcli: estimation, high-confidence bounds, certificates, and coverage
// experiments from the command line.
//
// Exit codes: 0 success, 1 coverage threshold exceeded, 2 invalid input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskbound/riskbound.hpp"

namespace rb = riskbound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitThreshold = 1;
constexpr int kExitInvalid = 2;

struct CommonOptions {
    double alpha = 0.1;
    double delta = 0.05;
    int n = 1000;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::string spec;
    std::string bound_kind;
    std::optional<double> sigma;
    std::optional<double> b;
    std::optional<double> epsilon;
    std::vector<double> beta_grid;
    std::string input_path;
    std::string output_path;
    std::string format;  // resolved per command after parsing
    double scale_bound = 1.0;
    int hypotheses = 1;
    double noise = 0.0;
    bool empirical_mean = false;
};

int thread_count_from_env() {
    const char* env = std::getenv("RISK_CLI_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    if (v > 256) return 256;
    return static_cast<int>(v);
}

// Loads one sample per line; blank lines are ignored.
std::vector<double> load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open input file '" + path + "'");
    }
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(line, &pos);
            if (line.find_first_not_of(" \t\r", pos) != std::string::npos) {
                throw std::invalid_argument("trailing characters");
            }
            values.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad sample at " + path + ":" +
                                        std::to_string(line_no) + ": '" + line + "'");
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("input file '" + path + "' contains no samples");
    }
    return values;
}

rb::SampleBatch acquire_batch(const CommonOptions& opt) {
    if (!opt.input_path.empty()) {
        return rb::SampleBatch(load_samples(opt.input_path));
    }
    if (opt.spec.empty()) {
        throw std::invalid_argument("provide either --input <file> or --spec <family>");
    }
    const rb::DistributionSpec spec = rb::parse_distribution_spec(opt.spec);
    rb::SplitMix64 rng(rb::substream_seed(opt.seed, 0));
    std::vector<double> draws;
    spec.sample_n(rng, opt.n, draws);
    return rb::SampleBatch(std::move(draws));
}

void emit(const rb::Record& record, const CommonOptions& opt, bool append_csv) {
    std::string text;
    if (opt.format == "json") {
        text = record.to_json() + "\n";
    } else {
        text = record.csv_row() + "\n";
    }
    if (opt.output_path.empty()) {
        std::cout << text;
        return;
    }
    const bool exists_nonempty = [&] {
        std::ifstream probe(opt.output_path);
        return probe.good() && probe.peek() != std::ifstream::traits_type::eof();
    }();
    std::ofstream out(opt.output_path,
                      append_csv ? std::ios::app : std::ios::trunc);
    if (!out) {
        throw std::invalid_argument("cannot open output file '" + opt.output_path + "'");
    }
    if (opt.format == "csv" && (!append_csv || !exists_nonempty)) {
        out << "# schema=1\n" << record.csv_header() << "\n";
    }
    out << text;
}

void echo_config(rb::Record& r, const CommonOptions& opt, const std::string& command) {
    r.add("command", command)
        .add("alpha", opt.alpha)
        .add("delta", opt.delta)
        .add("seed", opt.seed)
        .add("format", opt.format);
}

rb::TailClass tail_from_options(const CommonOptions& opt) {
    if (opt.bound_kind == "bounded01" || opt.bound_kind == "theorem4") {
        return rb::TailClass::bounded01();
    }
    if (opt.bound_kind == "subgaussian") {
        if (!opt.sigma) {
            throw std::invalid_argument("--bound subgaussian requires --sigma");
        }
        if (opt.b) {
            throw std::invalid_argument("--b is only meaningful with --bound subexponential");
        }
        return rb::TailClass::sub_gaussian(*opt.sigma);
    }
    if (opt.bound_kind == "subexponential") {
        if (!opt.sigma || !opt.b) {
            throw std::invalid_argument("--bound subexponential requires --sigma and --b");
        }
        return rb::TailClass::sub_exponential(*opt.sigma, *opt.b);
    }
    throw std::invalid_argument("unknown --bound kind '" + opt.bound_kind +
                                "' (expected bounded01, subgaussian, subexponential)");
}

int cmd_estimate(const CommonOptions& opt) {
    const rb::SampleBatch batch = acquire_batch(opt);
    const rb::EstimateResult est = rb::empirical_cvar(batch, opt.alpha);

    rb::Record r;
    r.add("n", batch.n())
        .add("alpha", opt.alpha)
        .add("empirical_cvar", est.value)
        .add("mu_hat", est.minimizer_mu)
        .add("tail_average", est.tail_average);
    if (opt.epsilon) {
        const rb::EstimateResult relaxed =
            rb::relaxed_cvar_variational(batch, opt.alpha, *opt.epsilon);
        r.add("tilde_cvar", relaxed.value).add("epsilon", *opt.epsilon);
    }
    r.add("empirical_var", rb::empirical_var(batch, opt.alpha));
    r.add("command", "estimate").add("seed", opt.seed).add("format", opt.format);
    emit(r, opt, false);
    return kExitOk;
}

int cmd_bound(const CommonOptions& opt) {
    const rb::SampleBatch batch = acquire_batch(opt);
    const rb::RiskParams params{opt.alpha, opt.delta, batch.n()};
    const rb::TailClass tail = tail_from_options(opt);

    rb::Record r;
    echo_config(r, opt, "bound");
    r.add("n", batch.n()).add("kind", opt.bound_kind);

    if (tail.kind == rb::TailKind::Bounded01) {
        if (batch.min() < 0.0 || batch.max() > 1.0) {
            throw std::invalid_argument(
                "--bound bounded01 requires every sample in [0,1]");
        }
        const rb::BoundCertificate cert =
            rb::bounded_cvar_upper_bound(rb::empirical_cvar(batch, opt.alpha), params);
        r.add("empirical_cvar", cert.empirical_cvar)
            .add("eps_n", cert.eps_n)
            .add("base_term", cert.base_term)
            .add("sqrt_term", cert.sqrt_term)
            .add("linear_term", cert.linear_term)
            .add("additive_term", cert.additive_term)
            .add("bound", cert.bound)
            .add("confidence", cert.confidence)
            .add("vacuous", cert.vacuous);
    } else {
        r.add("sigma", tail.sigma).add("b", tail.b);
        const rb::MeanMode mode = rb::EmpiricalUpperMean{opt.delta, tail};
        const rb::DeviationBound dev = rb::cvar_deviation_bound(batch, params, tail, mode);
        const double c_hat = rb::empirical_cvar(batch, opt.alpha).value;
        r.add("empirical_cvar", c_hat)
            .add("main_term", dev.main_term)
            .add("order_stat_term", dev.order_stat_term)
            .add("deviation_total", dev.total)
            .add("bound", c_hat + dev.total)
            .add("delta_split", opt.delta)
            .add("confidence", dev.confidence)
            .add("vacuous", false);
    }
    emit(r, opt, false);
    return kExitOk;
}

int cmd_certify(const CommonOptions& opt) {
    const rb::RiskParams params{opt.alpha, opt.delta, opt.n};
    std::vector<double> betas = opt.beta_grid.empty() ? std::vector<double>{0.0}
                                                      : opt.beta_grid;
    rb::SplitMix64 rng(rb::substream_seed(opt.seed, 0));
    const rb::ThresholdTask task = rb::make_threshold_task(
        rb::ThresholdTaskParams{opt.hypotheses, opt.n, opt.noise}, rng);
    const auto [posterior, cert] = rb::select_posterior(
        task.table, rb::DiscreteDistribution::uniform(opt.hypotheses), params, betas);

    rb::Record r;
    echo_config(r, opt, "certify");
    r.add("n", opt.n).add("hypotheses", opt.hypotheses).add("noise", opt.noise);
    r.add("bound", cert.bound)
        .add("empirical_cvar_mixture", cert.empirical_cvar_mixture)
        .add("kl", cert.kl)
        .add("cap_n", cert.cap_n)
        .add("k_n", cert.k_n)
        .add("eps_n", cert.eps_n)
        .add("sqrt_term", cert.sqrt_term)
        .add("linear_term", cert.linear_term)
        .add("additive_term", cert.additive_term)
        .add("confidence", cert.confidence)
        .add("vacuous", cert.vacuous);
    std::string weights;
    for (int h = 0; h < posterior.support_size(); ++h) {
        if (h) weights += ";";
        weights += rb::format_double_17(posterior.weight(h));
    }
    r.add("posterior", weights);
    emit(r, opt, false);
    return kExitOk;
}

rb::BoundKind bound_kind_from_options(const CommonOptions& opt) {
    if (opt.bound_kind == "bounded01" || opt.bound_kind == "theorem4") {
        return rb::Theorem4Bound{};
    }
    if (opt.bound_kind == "subgaussian") {
        if (!opt.sigma) {
            throw std::invalid_argument("--bound subgaussian requires --sigma");
        }
        return rb::SubGaussianBound{*opt.sigma};
    }
    if (opt.bound_kind == "subexponential") {
        if (!opt.sigma || !opt.b) {
            throw std::invalid_argument("--bound subexponential requires --sigma and --b");
        }
        return rb::SubExponentialBound{*opt.sigma, *opt.b};
    }
    if (opt.bound_kind == "pacbayes") {
        std::vector<double> betas =
            opt.beta_grid.empty() ? std::vector<double>{0.0} : opt.beta_grid;
        return rb::PacBayesBound{opt.hypotheses, opt.noise, betas};
    }
    throw std::invalid_argument("unknown --bound kind '" + opt.bound_kind + "'");
}

int cmd_coverage(const CommonOptions& opt) {
    if (opt.spec.empty()) {
        throw std::invalid_argument("coverage requires --spec");
    }
    const rb::DistributionSpec spec = rb::parse_distribution_spec(opt.spec);
    const rb::RiskParams params{opt.alpha, opt.delta, opt.n};
    const rb::BoundKind kind = bound_kind_from_options(opt);

    rb::CoverageOptions options;
    options.bound_scale = opt.scale_bound;
    options.empirical_mean_mode = opt.empirical_mean;
    options.threads = thread_count_from_env();

    const rb::CoverageReport report =
        rb::coverage_experiment(spec, params, kind, opt.trials, opt.seed, options);

    emit(rb::coverage_record(spec, params, kind, report), opt, true);

    return report.violation_rate <= rb::coverage_pass_threshold(report) ? kExitOk
                                                                        : kExitThreshold;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CVaR estimators, high-confidence bounds, and coverage experiments"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOptions opt;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", opt.alpha, "CVaR level in (0,1)");
        sub->add_option("--delta", opt.delta, "failure probability in (0,1)");
        sub->add_option("--n", opt.n, "sample count");
        sub->add_option("--seed", opt.seed, "64-bit master seed");
        sub->add_option("--spec", opt.spec,
                        "distribution descriptor, e.g. uniform01 or normal:0,1");
        sub->add_option("--output", opt.output_path, "output path (default stdout)");
        sub->add_option("--format", opt.format,
                        "output format (default json; coverage defaults to csv)")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* estimate = app.add_subcommand("estimate", "empirical CVaR of a sample batch");
    add_common(estimate);
    estimate->add_option("--input", opt.input_path, "text file, one sample per line");
    estimate->add_option("--epsilon", opt.epsilon,
                         "budget relaxation; adds the tilde_cvar field");

    CLI::App* bound = app.add_subcommand("bound", "closed-form upper bound on CVaR");
    add_common(bound);
    bound->add_option("--input", opt.input_path, "text file, one sample per line");
    bound->add_option("--bound", opt.bound_kind, "bounded01 | subgaussian | subexponential")
        ->required();
    bound->add_option("--sigma", opt.sigma, "variance proxy");
    bound->add_option("--b", opt.b, "sub-exponential scale");

    CLI::App* certify =
        app.add_subcommand("certify", "select a posterior and certify it on the "
                                      "threshold-classifier task");
    add_common(certify);
    certify->add_option("--hypotheses", opt.hypotheses, "number of threshold hypotheses");
    certify->add_option("--noise", opt.noise, "label flip probability in [0, 1/2)");
    certify->add_option("--beta-grid", opt.beta_grid, "Gibbs temperatures (0 is implied)")
        ->delimiter(',');

    CLI::App* coverage =
        app.add_subcommand("coverage", "Monte Carlo validation of a bound's guarantee");
    add_common(coverage);
    coverage->add_option("--trials", opt.trials, "number of repetitions");
    coverage->add_option("--bound", opt.bound_kind,
                         "bounded01 | subgaussian | subexponential | pacbayes")
        ->required();
    coverage->add_option("--sigma", opt.sigma, "variance proxy");
    coverage->add_option("--b", opt.b, "sub-exponential scale");
    coverage->add_option("--hypotheses", opt.hypotheses, "pacbayes: hypothesis count");
    coverage->add_option("--noise", opt.noise, "pacbayes: label flip probability");
    coverage->add_option("--beta-grid", opt.beta_grid, "pacbayes: Gibbs temperatures")
        ->delimiter(',');
    coverage->add_option("--scale-bound", opt.scale_bound,
                         "debug: multiply the bound before the violation check");
    coverage->add_flag("--empirical-mean", opt.empirical_mean,
                       "use the empirical order-statistic upper bound with a "
                       "delta/2 + delta/2 split");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (opt.format.empty()) opt.format = coverage->parsed() ? "csv" : "json";
        if (estimate->parsed()) return cmd_estimate(opt);
        if (bound->parsed()) return cmd_bound(opt);
        if (certify->parsed()) return cmd_certify(opt);
        if (coverage->parsed()) return cmd_coverage(opt);
        std::cerr << "riskcli: no subcommand given\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "riskcli: " << e.what() << "\n";
        return kExitInvalid;
    }
}

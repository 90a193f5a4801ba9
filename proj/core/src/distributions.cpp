#include "riskbound/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "riskbound/math.hpp"

namespace riskbound {

namespace {

void validate_family(const DistributionSpec::Family& family) {
    std::visit(
        [](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                if (!std::isfinite(f.c)) {
                    throw std::invalid_argument("Constant: value must be finite");
                }
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                if (!(f.p >= 0.0 && f.p <= 1.0)) {
                    throw std::invalid_argument("Bernoulli: p must lie in [0,1]");
                }
            } else if constexpr (std::is_same_v<T, Normal>) {
                if (!std::isfinite(f.mu) || !(f.sigma > 0.0) || !std::isfinite(f.sigma)) {
                    throw std::invalid_argument("Normal: need finite mu and sigma > 0");
                }
            } else if constexpr (std::is_same_v<T, Exponential>) {
                if (!(f.rate > 0.0) || !std::isfinite(f.rate)) {
                    throw std::invalid_argument("Exponential: rate must be positive");
                }
            } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
                if (f.values.empty() || f.values.size() != f.probs.size()) {
                    throw std::invalid_argument(
                        "DiscreteAtoms: values and probs must be nonempty and matched");
                }
                double total = 0.0;
                for (std::size_t i = 0; i < f.values.size(); ++i) {
                    if (!std::isfinite(f.values[i])) {
                        throw std::invalid_argument("DiscreteAtoms: values must be finite");
                    }
                    if (!(f.probs[i] >= 0.0)) {
                        throw std::invalid_argument("DiscreteAtoms: probs must be >= 0");
                    }
                    total += f.probs[i];
                }
                if (std::abs(total - 1.0) > 1e-12) {
                    throw std::invalid_argument("DiscreteAtoms: probs must sum to 1");
                }
            }
        },
        family);
}

// Distinct atom values in decreasing order with aggregated probabilities.
// Atoms sharing a value are treated jointly everywhere downstream.
struct SortedAtoms {
    std::vector<double> values;
    std::vector<double> probs;
};

SortedAtoms sorted_distinct(const DiscreteAtoms& atoms) {
    std::map<double, double, std::greater<double>> agg;
    for (std::size_t i = 0; i < atoms.values.size(); ++i) {
        agg[atoms.values[i]] += atoms.probs[i];
    }
    SortedAtoms out;
    out.values.reserve(agg.size());
    out.probs.reserve(agg.size());
    for (const auto& [v, p] : agg) {
        out.values.push_back(v);
        out.probs.push_back(p);
    }
    return out;
}

double discrete_tail_average(const DiscreteAtoms& atoms, double alpha) {
    const SortedAtoms sorted = sorted_distinct(atoms);
    double cum = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < sorted.values.size(); ++k) {
        if (cum + sorted.probs[k] >= alpha) {
            acc += (alpha - cum) * sorted.values[k];  // fractional quantile atom
            return acc / alpha;
        }
        acc += sorted.probs[k] * sorted.values[k];
        cum += sorted.probs[k];
    }
    // Rounding pushed the cumulative a hair under alpha: close with the last atom.
    acc += (alpha - cum) * sorted.values.back();
    return acc / alpha;
}

// --- adaptive Simpson quadrature ------------------------------------------

double simpson_slice(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double m,
                        double b, double fa, double fm, double fb, double whole,
                        double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_slice(fa, flm, fm, m - a);
    const double right = simpson_slice(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, simpson_slice(fa, fm, fb, b - a),
                            eps, 48);
}

// --- per-family plumbing for the numeric oracle ---------------------------

struct OracleHooks {
    double lo = 0.0;  // search bracket, guaranteed to contain the minimizer
    double hi = 0.0;
    std::function<double(double)> partial_expectation;  // mu -> E[Z - mu]_+
};

constexpr double kQuadTol = 1e-12;

OracleHooks make_hooks(const DistributionSpec& spec) {
    return std::visit(
        [&](const auto& f) -> OracleHooks {
            using T = std::decay_t<decltype(f)>;
            OracleHooks h;
            if constexpr (std::is_same_v<T, Constant>) {
                h.lo = f.c - 1.0;
                h.hi = f.c + 1.0;
                h.partial_expectation = [f](double mu) { return std::max(f.c - mu, 0.0); };
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                h.lo = -1.0;
                h.hi = 2.0;
                h.partial_expectation = [f](double mu) {
                    return (1.0 - f.p) * std::max(-mu, 0.0) + f.p * std::max(1.0 - mu, 0.0);
                };
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                h.lo = -0.5;
                h.hi = 1.5;
                h.partial_expectation = [](double mu) {
                    if (mu >= 1.0) return 0.0;
                    const double a = std::max(mu, 0.0);
                    return integrate([mu](double x) { return x - mu; }, a, 1.0, kQuadTol);
                };
            } else if constexpr (std::is_same_v<T, Normal>) {
                const double lo_sup = f.mu - 13.0 * f.sigma;
                const double hi_sup = f.mu + 13.0 * f.sigma;
                h.lo = lo_sup;
                h.hi = hi_sup;
                h.partial_expectation = [f, lo_sup, hi_sup](double mu) {
                    if (mu >= hi_sup) return 0.0;
                    const double a = std::max(mu, lo_sup);
                    return integrate(
                        [f, mu](double x) {
                            return (x - mu) * normal_pdf((x - f.mu) / f.sigma) / f.sigma;
                        },
                        a, hi_sup, kQuadTol);
                };
            } else if constexpr (std::is_same_v<T, Exponential>) {
                const double hi_sup = 50.0 / f.rate;
                h.lo = -1.0 / f.rate;
                h.hi = hi_sup;
                h.partial_expectation = [f, hi_sup](double mu) {
                    if (mu >= hi_sup) return 0.0;
                    const double a = std::max(mu, 0.0);
                    return integrate(
                        [f, mu](double x) {
                            return (x - mu) * f.rate * std::exp(-f.rate * x);
                        },
                        a, hi_sup, kQuadTol);
                };
            } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
                const auto [min_it, max_it] =
                    std::minmax_element(f.values.begin(), f.values.end());
                h.lo = *min_it - 1.0;
                h.hi = *max_it + 1.0;
                h.partial_expectation = [f](double mu) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < f.values.size(); ++i) {
                        acc += f.probs[i] * std::max(f.values[i] - mu, 0.0);
                    }
                    return acc;
                };
            }
            return h;
        },
        spec.family());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

DistributionSpec::DistributionSpec(Family family) : family_(std::move(family)) {
    validate_family(family_);
}

double DistributionSpec::sample(SplitMix64& rng) const {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.c;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return rng.next_unit() < f.p ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return rng.next_unit();
            } else if constexpr (std::is_same_v<T, Normal>) {
                return f.mu + f.sigma * inverse_normal_cdf(rng.next_unit());
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log1p(-rng.next_unit()) / f.rate;
            } else {
                const double u = rng.next_unit();
                double cum = 0.0;
                for (std::size_t i = 0; i < f.values.size(); ++i) {
                    cum += f.probs[i];
                    if (u <= cum) return f.values[i];
                }
                return f.values.back();
            }
        },
        family_);
}

void DistributionSpec::sample_n(SplitMix64& rng, int n, std::vector<double>& out) const {
    out.clear();
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(sample(rng));
}

double DistributionSpec::mean() const {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.c;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return f.p;
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return 0.5;
            } else if constexpr (std::is_same_v<T, Normal>) {
                return f.mu;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return 1.0 / f.rate;
            } else {
                return std::inner_product(f.values.begin(), f.values.end(),
                                          f.probs.begin(), 0.0);
            }
        },
        family_);
}

bool DistributionSpec::support_in_unit_interval() const {
    return std::visit(
        [](const auto& f) -> bool {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.c >= 0.0 && f.c <= 1.0;
            } else if constexpr (std::is_same_v<T, Bernoulli> ||
                                 std::is_same_v<T, Uniform01>) {
                return true;
            } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
                return std::all_of(f.values.begin(), f.values.end(),
                                   [](double v) { return v >= 0.0 && v <= 1.0; });
            } else {
                return false;
            }
        },
        family_);
}

double true_cvar(const DistributionSpec& spec, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("true_cvar: alpha must lie in (0,1)");
    }
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.c;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return std::min(1.0, f.p / alpha);
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return 1.0 - 0.5 * alpha;
            } else if constexpr (std::is_same_v<T, Normal>) {
                const double z = inverse_normal_cdf(1.0 - alpha);
                return f.mu + f.sigma * normal_pdf(z) / alpha;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return (1.0 + std::log(1.0 / alpha)) / f.rate;
            } else {
                return discrete_tail_average(f, alpha);
            }
        },
        spec.family());
}

double numeric_cvar_oracle(const DistributionSpec& spec, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("numeric_cvar_oracle: alpha must lie in (0,1)");
    }
    const OracleHooks hooks = make_hooks(spec);
    const auto objective = [&](double mu) {
        return mu + hooks.partial_expectation(mu) / alpha;
    };

    const double f_lo = objective(hooks.lo);
    const double f_hi = objective(hooks.hi);

    // Golden-section search; the objective is convex with an interior minimum.
    constexpr double kGolden = 0.6180339887498949;
    double a = hooks.lo;
    double b = hooks.hi;
    const double tol = 1e-12 * (1.0 + std::abs(a) + std::abs(b));
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = objective(d);
        }
    }
    const double value = objective(0.5 * (a + b));
    if (value >= std::min(f_lo, f_hi) - 1e-10) {
        std::ostringstream msg;
        msg << "numeric_cvar_oracle: minimizer escaped the bracket [" << hooks.lo << ", "
            << hooks.hi << "] for spec " << to_string(spec) << " at alpha " << alpha;
        throw std::runtime_error(msg.str());
    }
    return value;
}

DualDensity dual_density_discrete(const DiscreteAtoms& atoms, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("dual_density_discrete: alpha must lie in (0,1)");
    }
    validate_family(atoms);
    const SortedAtoms sorted = sorted_distinct(atoms);

    // Locate the quantile atom: smallest k with cumulative prob >= alpha.
    std::size_t k = 0;
    double cum_before = 0.0;
    while (k + 1 < sorted.values.size() && cum_before + sorted.probs[k] < alpha) {
        cum_before += sorted.probs[k];
        ++k;
    }

    const double quantile_value = sorted.values[k];
    const double quantile_prob = sorted.probs[k];
    const double cap = 1.0 / alpha;
    const double frac =
        quantile_prob > 0.0
            ? std::clamp((alpha - cum_before) / (alpha * quantile_prob), 0.0, cap)
            : 0.0;

    DualDensity out;
    out.atom_values = atoms.values;
    out.density_values.reserve(atoms.values.size());
    for (double v : atoms.values) {
        if (v > quantile_value) {
            out.density_values.push_back(cap);
        } else if (v == quantile_value) {
            out.density_values.push_back(frac);
        } else {
            out.density_values.push_back(0.0);
        }
    }
    return out;
}

double dual_mean_gap(const DiscreteAtoms& atoms, double alpha) {
    const DualDensity q = dual_density_discrete(atoms, alpha);
    double reweighted_mean = 0.0;
    for (std::size_t i = 0; i < atoms.values.size(); ++i) {
        reweighted_mean += atoms.probs[i] * atoms.values[i] * q.density_values[i];
    }
    const double cvar = true_cvar(DistributionSpec(atoms), alpha);
    return std::abs(reweighted_mean - cvar);
}

MgfReport check_reweighted_mgf(const DiscreteAtoms& atoms, double alpha, double sigma,
                               const std::vector<double>& etas, int sample_count,
                               std::uint64_t seed) {
    if (sample_count < 2) {
        throw std::invalid_argument("check_reweighted_mgf: need at least 2 samples");
    }
    const DualDensity q = dual_density_discrete(atoms, alpha);
    std::map<double, double> density_of;
    for (std::size_t i = 0; i < q.atom_values.size(); ++i) {
        density_of[q.atom_values[i]] = q.density_values[i];
    }

    const DistributionSpec spec{DistributionSpec::Family{atoms}};
    SplitMix64 rng(seed);
    std::vector<double> reweighted(static_cast<std::size_t>(sample_count));
    for (double& y : reweighted) {
        const double z = spec.sample(rng);
        y = z * density_of.at(z);
    }

    MgfReport report;
    report.sample_count = sample_count;
    report.seed = seed;
    for (double eta : etas) {
        MgfCheckPoint pt;
        pt.eta = eta;
        double mean = 0.0;
        for (double y : reweighted) mean += std::exp(eta * y);
        mean /= sample_count;
        double var = 0.0;
        for (double y : reweighted) {
            const double d = std::exp(eta * y) - mean;
            var += d * d;
        }
        var /= (sample_count - 1);
        pt.estimate = mean;
        pt.std_error = std::sqrt(var / sample_count);
        pt.bound = 2.0 * std::exp(eta * eta * sigma * sigma / (2.0 * alpha * alpha));
        pt.within_band = pt.estimate <= pt.bound + 3.0 * pt.std_error;
        report.points.push_back(pt);
    }
    return report;
}

std::string to_string(const DistributionSpec& spec) {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return "constant:" + format_double(f.c);
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return "bernoulli:" + format_double(f.p);
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return "uniform01";
            } else if constexpr (std::is_same_v<T, Normal>) {
                return "normal:" + format_double(f.mu) + "," + format_double(f.sigma);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return "exponential:" + format_double(f.rate);
            } else {
                std::string s = "discrete:";
                for (std::size_t i = 0; i < f.values.size(); ++i) {
                    if (i) s += ",";
                    s += format_double(f.values[i]) + "@" + format_double(f.probs[i]);
                }
                return s;
            }
        },
        spec.family());
}

namespace {

double parse_number(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("spec: cannot parse " + what + " from '" + text + "'");
    }
    if (pos != text.size()) {
        throw std::invalid_argument("spec: trailing characters in " + what + " '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    return parts;
}

}  // namespace

DistributionSpec parse_distribution_spec(const std::string& text) {
    const auto colon = text.find(':');
    const std::string family = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (family == "uniform01") {
        if (!args.empty()) {
            throw std::invalid_argument("spec: uniform01 takes no parameters");
        }
        return DistributionSpec(Uniform01{});
    }
    if (family == "constant") {
        return DistributionSpec(Constant{parse_number(args, "constant value")});
    }
    if (family == "bernoulli") {
        return DistributionSpec(Bernoulli{parse_number(args, "bernoulli p")});
    }
    if (family == "exponential") {
        return DistributionSpec(Exponential{parse_number(args, "exponential rate")});
    }
    if (family == "normal") {
        const auto parts = split(args, ',');
        if (parts.size() != 2) {
            throw std::invalid_argument("spec: normal needs 'normal:<mu>,<sigma>'");
        }
        return DistributionSpec(
            Normal{parse_number(parts[0], "normal mu"), parse_number(parts[1], "normal sigma")});
    }
    if (family == "discrete") {
        DiscreteAtoms atoms;
        for (const auto& part : split(args, ',')) {
            const auto at = part.find('@');
            if (at == std::string::npos) {
                throw std::invalid_argument(
                    "spec: discrete atoms need 'discrete:<value>@<prob>,...'");
            }
            atoms.values.push_back(parse_number(part.substr(0, at), "atom value"));
            atoms.probs.push_back(parse_number(part.substr(at + 1), "atom prob"));
        }
        return DistributionSpec(std::move(atoms));
    }
    throw std::invalid_argument("spec: unknown distribution family '" + family + "'");
}

}  // namespace riskbound

#include "ppi/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ppi {

std::string to_string(Fading f) { return f == Fading::rayleigh ? "rayleigh" : "none"; }

Fading fading_from_string(const std::string& s) {
    if (s == "rayleigh") return Fading::rayleigh;
    if (s == "none") return Fading::none;
    throw ParamError("unknown fading model: " + s);
}

void SimConfig::validate() const {
    if (trials < min_trials) throw ParamError("at least 10000 trials are required");
    if (!(std::isfinite(region_radius) && region_radius >= 0)) throw ParamError("region radius must be finite and >= 0");
    for (double r : r_O_grid) {
        if (!(std::isfinite(r) && r > 0)) throw ParamError("r_O grid entries must be positive and finite");
        if (region_radius > 0 && r > region_radius) throw ParamError("r_O grid exceeds the simulation region");
    }
    if (aloha && fading != Fading::rayleigh) throw ParamError("multi-slot simulation requires Rayleigh fading");
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double lambda_active(const ModelParams& p, const SimConfig& cfg) {
    return cfg.aloha ? cfg.aloha->p * p.lambda() : p.lambda();
}

double max_grid(const SimConfig& cfg) {
    double m = 0.0;
    for (double r : cfg.r_O_grid) m = std::max(m, r);
    return m;
}

// Interferers closer than this are drawn one by one with their fades
double explicit_radius(const ModelParams& p, const SimConfig& cfg, double R) {
    return std::min(R, std::max(2.0 * max_grid(cfg), 10.0 * p.r_T()));
}

long long poisson(std::mt19937_64& rng, double mean) {
    if (!(mean > 0)) return 0;
    return std::poisson_distribution<long long>(mean)(rng);
}

double uniform(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double exp1(std::mt19937_64& rng) { return std::exponential_distribution<double>(1.0)(rng); }

// Whether an independent Exp(1) variable falls below s times the faded interference from R1 < r < R.
// Each point triggers on its own with probability 1/(1 + r^alpha/s); triggering points are
// drawn by thinning a Poisson process of intensity lambda s r^-alpha.
bool field_exceeds(std::mt19937_64& rng, const ModelParams& p, double lam, double s, double R1, double R) {
    if (!(R > R1)) return false;
    const int n = p.n();
    const double a = p.alpha(), cn = unit_ball_volume(n);
    const double e = n - a;  // negative
    const double u_lo = std::pow(R, e), u_hi = std::pow(R1, e);
    const double mass = lam * cn * n * s * (u_hi - u_lo) / (a - n);
    const long long cnt = poisson(rng, mass);
    for (long long i = 0; i < cnt; ++i) {
        const double r = std::pow(u_lo + (u_hi - u_lo) * uniform(rng), 1.0 / e);
        if (uniform(rng) * (1.0 + s * std::pow(r, -a)) < 1.0) return true;
    }
    return false;
}

// Distance of a point uniform in the shell R0 < |x| < R
double shell_radius(std::mt19937_64& rng, int n, double R0, double R) {
    const double v0 = std::pow(R0, n), v1 = std::pow(R, n);
    return std::pow(v0 + (v1 - v0) * uniform(rng), 1.0 / n);
}

constexpr std::uint64_t chunk_size = 2048;

template <class Acc, class Body>
Acc run_trials(const SimConfig& cfg, const Acc& zero, Body body) {
    const std::uint64_t nchunks = (cfg.trials + chunk_size - 1) / chunk_size;
    std::vector<Acc> parts(nchunks, zero);
    unsigned T = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    T = static_cast<unsigned>(std::min<std::uint64_t>(T, nchunks));
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::uint64_t c = next++;
            if (c >= nchunks) return;
            const std::uint64_t end = std::min(cfg.trials, (c + 1) * chunk_size);
            for (std::uint64_t t = c * chunk_size; t < end; ++t) {
                auto rng = trial_rng(cfg.seed, t);
                body(rng, parts[c]);
            }
        }
    };
    if (T <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < T; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    Acc total = zero;
    for (const auto& part : parts) total.merge(part);
    return total;
}

// Pearson correlation of two indicators, delta-method standard error
Estimate phi_estimate(std::uint64_t nx, std::uint64_t ny, std::uint64_t nxy, std::uint64_t n) {
    Estimate e;
    e.n = n;
    e.low_confidence = n < low_confidence_n;
    const double a = double(nx) / n, b = double(ny) / n, c = double(nxy) / n;
    const double va = a * (1 - a), vb = b * (1 - b);
    if (!(va > 0 && vb > 0)) {
        e.value = 0.0;
        e.se = std::numeric_limits<double>::infinity();
        e.low_confidence = true;
        return e;
    }
    const double den = std::sqrt(va * vb);
    const double r = (c - a * b) / den;
    const double ga = -b / den - r * (1 - 2 * a) / (2 * va);
    const double gb = -a / den - r * (1 - 2 * b) / (2 * vb);
    const double gc = 1.0 / den;
    const double cab = c - a * b;
    const double var = ga * ga * va + gb * gb * vb + gc * gc * c * (1 - c) + 2 * ga * gb * cab +
                       2 * ga * gc * c * (1 - a) + 2 * gb * gc * c * (1 - b);
    e.value = r;
    e.se = std::sqrt(std::max(var, 0.0) / n);
    return e;
}

struct SingleAcc {
    std::uint64_t h1 = 0;
    std::vector<std::uint64_t> d1, h1d1;
    void merge(const SingleAcc& o) {
        h1 += o.h1;
        for (std::size_t i = 0; i < d1.size(); ++i) {
            d1[i] += o.d1[i];
            h1d1[i] += o.h1d1[i];
        }
    }
};

struct MultiAcc {
    std::vector<std::uint64_t> counts;
    void merge(const MultiAcc& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    }
};

struct MeanAcc {
    double sum = 0, sumsq = 0;
    std::uint64_t n = 0;
    void merge(const MeanAcc& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        n += o.n;
    }
};

}  // namespace

double truncation_bias_bound(const ModelParams& p, double lam, double R) {
    const DerivedParams d = derive(p);
    return d.sigma * lam * d.c_n * p.n() * std::pow(R, p.n() - p.alpha()) / (p.alpha() - p.n());
}

double auto_region_radius(const ModelParams& p, const SimConfig& cfg) {
    if (cfg.region_radius > 0) return cfg.region_radius;
    const DerivedParams d = derive(p);
    const double k = d.sigma * lambda_active(p, cfg) * d.c_n * p.n() / (truncation_target * (p.alpha() - p.n()));
    const double R = std::pow(k, 1.0 / (p.alpha() - p.n()));
    return std::max({R, 2.0 * max_grid(cfg), 10.0 * p.r_T()});
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t x = seed ^ splitmix64(trial);
    std::seed_seq seq{splitmix64(x), splitmix64(x)};
    return std::mt19937_64(seq);
}

Estimate bernoulli_estimate(std::uint64_t hits, std::uint64_t n) {
    Estimate e;
    e.n = n;
    e.low_confidence = n < low_confidence_n;
    if (n == 0) {
        e.value = std::numeric_limits<double>::quiet_NaN();
        e.se = std::numeric_limits<double>::infinity();
        return e;
    }
    e.value = double(hits) / n;
    e.se = std::sqrt(e.value * (1 - e.value) / n);
    return e;
}

bool agrees(const Estimate& e, double truth, double k) {
    if (e.n == 0 || !std::isfinite(e.value)) return false;
    const double se = e.se > 0 ? e.se : std::sqrt(std::max(truth * (1 - truth), 0.0) / e.n);
    return std::abs(e.value - truth) <= k * se;
}

Realization sample_network(const ModelParams& p, const SimConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    const int n = p.n();
    const double R = auto_region_radius(p, cfg);
    Realization net;
    net.n = n;
    const long long cnt = poisson(rng, p.lambda() * unit_ball_volume(n) * std::pow(R, n));
    std::normal_distribution<double> gauss;
    for (long long i = 0; i < cnt; ++i) {
        double dir[3], norm = 0;
        for (int j = 0; j < n; ++j) {
            dir[j] = gauss(rng);
            norm += dir[j] * dir[j];
        }
        norm = std::sqrt(norm);
        const double r = R * std::pow(uniform(rng), 1.0 / n);
        for (int j = 0; j < n; ++j) net.positions.push_back(r * dir[j] / norm);
        net.distances.push_back(r);
        net.fades.push_back(cfg.fading == Fading::rayleigh ? exp1(rng) : 1.0);
    }
    net.reference_tx.assign(n, 0.0);
    net.reference_tx[0] = p.r_T();
    net.reference_fade = cfg.fading == Fading::rayleigh ? exp1(rng) : 1.0;
    return net;
}

double sinr(const ModelParams& p, const Realization& net) {
    double I = 0;
    for (std::size_t i = 0; i < net.distances.size(); ++i) I += net.fades[i] * std::pow(net.distances[i], -p.alpha());
    return net.reference_fade * std::pow(p.r_T(), -p.alpha()) / (I + p.eta());
}

SimEstimate estimate_single(const ModelParams& p, const SimConfig& cfg) {
    cfg.validate();
    if (cfg.aloha) throw ParamError("single-observation simulation takes no Aloha parameters");
    const int n = p.n();
    const double a = p.alpha(), cn = unit_ball_volume(n), lam = p.lambda();
    const double sigma = derive(p).sigma;
    const double R = auto_region_radius(p, cfg);
    const double R1 = explicit_radius(p, cfg, R);
    const std::size_t G = cfg.r_O_grid.size();

    SingleAcc zero;
    zero.d1.assign(G, 0);
    zero.h1d1.assign(G, 0);
    const bool fade = cfg.fading == Fading::rayleigh;
    const double near_mean = lam * cn * std::pow(R1, n);
    const double far_mean = lam * cn * (std::pow(R, n) - std::pow(R1, n));

    auto body = [&](std::mt19937_64& rng, SingleAcc& acc) {
        const double Fo = fade ? exp1(rng) : 1.0;
        const double limit = Fo / sigma - p.eta();  // H = 1 iff I <= limit
        double I = 0, rmin = std::numeric_limits<double>::infinity();
        const long long cnt = poisson(rng, near_mean);
        for (long long i = 0; i < cnt; ++i) {
            const double r = R1 * std::pow(uniform(rng), 1.0 / n);
            const double F = fade ? exp1(rng) : 1.0;
            I += F * std::pow(r, -a);
            rmin = std::min(rmin, r);
        }
        bool h = I <= limit;
        if (h) {
            if (fade) {
                // given Fo >= sigma (I + eta), the excess is again Exp(1)
                h = !field_exceeds(rng, p, lam, sigma, R1, R);
            } else {
                const long long far = poisson(rng, far_mean);
                for (long long i = 0; i < far && h; ++i) {
                    I += std::pow(shell_radius(rng, n, R1, R), -a);
                    h = I <= limit;
                }
            }
        }
        acc.h1 += h;
        for (std::size_t g = 0; g < G; ++g) {
            const bool d = rmin >= cfg.r_O_grid[g];
            acc.d1[g] += d;
            acc.h1d1[g] += d && h;
        }
    };
    const SingleAcc tot = run_trials(cfg, zero, body);

    SimEstimate est;
    est.trials = cfg.trials;
    est.region_radius = R;
    est.bias_bound = truncation_bias_bound(p, lam, R);
    est.p_H = bernoulli_estimate(tot.h1, cfg.trials);
    const std::uint64_t N = cfg.trials, h0 = N - tot.h1;
    for (std::size_t g = 0; g < G; ++g) {
        RadiusEstimate re;
        re.r_O = cfg.r_O_grid[g];
        const std::uint64_t d1 = tot.d1[g], h1d1 = tot.h1d1[g];
        const std::uint64_t h1d0 = tot.h1 - h1d1, h0d1 = d1 - h1d1;
        re.p_D = bernoulli_estimate(d1, N);
        re.p_HD = bernoulli_estimate(h1d1, N);
        re.p_H_given_D1 = bernoulli_estimate(h1d1, d1);
        re.p_H_given_D0 = bernoulli_estimate(h1d0, N - d1);
        re.rho = phi_estimate(tot.h1, d1, h1d1, N);
        re.p_I = bernoulli_estimate(h0d1, h0);
        re.p_II = bernoulli_estimate(h1d0, tot.h1);
        est.radii.push_back(re);
    }
    return est;
}

MultiSimEstimate estimate_multiobs(const ModelParams& p, const SimConfig& cfg) {
    cfg.validate();
    if (!cfg.aloha) throw ParamError("multi-slot simulation needs Aloha parameters");
    if (p.eta() != 0.0) throw ParamError("multi-observation model requires eta = 0");
    if (cfg.r_O_grid.size() != 1) throw ParamError("multi-slot simulation takes exactly one r_O");
    const AlohaParams al = *cfg.aloha;
    const int n = p.n(), N = al.N;
    const double a = p.alpha(), cn = unit_ball_volume(n), lam = p.lambda();
    const double sigma = derive(p).sigma, r_O = cfg.r_O_grid[0];
    const double R = auto_region_radius(p, cfg);
    const double R1 = explicit_radius(p, cfg, R);
    const double near_mean = lam * cn * std::pow(R1, n);

    MultiAcc zero;
    zero.counts.assign(4 * (N + 1), 0);
    auto body = [&](std::mt19937_64& rng, MultiAcc& acc) {
        thread_local std::vector<double> pts;
        pts.clear();
        const long long cnt = poisson(rng, near_mean);
        for (long long i = 0; i < cnt; ++i) pts.push_back(R1 * std::pow(uniform(rng), 1.0 / n));
        int K = 0;
        for (int k = 0; k < N; ++k) {
            bool ok = true;
            for (double r : pts)
                if (uniform(rng) < al.p && r < r_O) ok = false;
            K += ok;
        }
        const double Fo = exp1(rng);
        double I = 0;
        bool d = true;
        for (double r : pts) {
            if (!(uniform(rng) < al.p)) continue;
            if (r < r_O) d = false;
            I += exp1(rng) * std::pow(r, -a);
        }
        bool h = sigma * I <= Fo;
        if (h) h = !field_exceeds(rng, p, al.p * lam, sigma, R1, R);
        ++acc.counts[(2 * K + d) * 2 + h];
    };
    const MultiAcc tot = run_trials(cfg, zero, body);

    MultiSimEstimate est;
    est.N = N;
    est.r_O = r_O;
    est.trials = cfg.trials;
    est.region_radius = R;
    est.bias_bound = truncation_bias_bound(p, al.p * lam, R);
    est.counts = tot.counts;
    auto c = [&](int K, int dd, int h) { return tot.counts[(2 * K + dd) * 2 + h]; };
    std::uint64_t h1 = 0, d1 = 0;
    for (int K = 0; K <= N; ++K) {
        const std::uint64_t nK = c(K, 0, 0) + c(K, 0, 1) + c(K, 1, 0) + c(K, 1, 1);
        est.p_K.push_back(bernoulli_estimate(nK, cfg.trials));
        est.p_h_given_K.push_back(bernoulli_estimate(c(K, 0, 1) + c(K, 1, 1), nK));
        est.p_d_given_K.push_back(bernoulli_estimate(c(K, 1, 0) + c(K, 1, 1), nK));
        est.post_d0.push_back(bernoulli_estimate(c(K, 0, 1), c(K, 0, 0) + c(K, 0, 1)));
        est.post_d1.push_back(bernoulli_estimate(c(K, 1, 1), c(K, 1, 0) + c(K, 1, 1)));
        h1 += c(K, 0, 1) + c(K, 1, 1);
        d1 += c(K, 1, 0) + c(K, 1, 1);
    }
    est.p_H = bernoulli_estimate(h1, cfg.trials);
    est.p_D = bernoulli_estimate(d1, cfg.trials);
    return est;
}

RuleErrorEstimate estimate_rule_errors(const MultiSimEstimate& est, const DecisionRuleTable& rule) {
    if (rule.N() != est.N) throw ParamError("rule table does not match N");
    std::uint64_t fa = 0, h0 = 0, miss = 0, h1 = 0;
    for (int K = 0; K <= est.N; ++K)
        for (int d = 0; d <= 1; ++d) {
            const std::uint64_t c0 = est.counts[(2 * K + d) * 2], c1 = est.counts[(2 * K + d) * 2 + 1];
            h0 += c0;
            h1 += c1;
            if (rule(K, d)) fa += c0;
            else miss += c1;
        }
    return {bernoulli_estimate(fa, h0), bernoulli_estimate(miss, h1)};
}

Estimate estimate_void_laplace(const ModelParams& p, const SimConfig& cfg, double s) {
    cfg.validate();
    if (cfg.fading != Fading::rayleigh) throw ParamError("void Laplace estimate assumes Rayleigh fading");
    if (cfg.r_O_grid.size() != 1) throw ParamError("void Laplace estimate takes exactly one r_O");
    if (!(s > 0)) throw ParamError("s must be positive");
    const int n = p.n();
    const double a = p.alpha(), cn = unit_ball_volume(n), lam = lambda_active(p, cfg);
    const double r_O = cfg.r_O_grid[0];
    const double R = auto_region_radius(p, cfg);
    const double R1 = explicit_radius(p, cfg, R);
    const double near_mean = lam * cn * (std::pow(R1, n) - std::pow(r_O, n));

    auto body = [&](std::mt19937_64& rng, MeanAcc& acc) {
        double I = 0;
        const long long cnt = poisson(rng, near_mean);
        for (long long i = 0; i < cnt; ++i) I += exp1(rng) * std::pow(shell_radius(rng, n, r_O, R1), -a);
        const double v = field_exceeds(rng, p, lam, s, R1, R) ? 0.0 : std::exp(-s * I);
        acc.sum += v;
        acc.sumsq += v * v;
        ++acc.n;
    };
    const MeanAcc tot = run_trials(cfg, MeanAcc{}, body);
    Estimate e;
    e.n = tot.n;
    e.low_confidence = tot.n < low_confidence_n;
    e.value = tot.sum / tot.n;
    e.se = std::sqrt(std::max(tot.sumsq / tot.n - e.value * e.value, 0.0) / tot.n);
    return e;
}

}  // namespace ppi

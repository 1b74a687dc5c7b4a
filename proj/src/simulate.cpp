#include "bankopt/simulate.hpp"
#include "bankopt/budget_detail.hpp"
#include "bankopt/errors.hpp"
#include "bankopt/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace bankopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d649cb244e50b1ULL;
    return z ^ (z >> 31);
}

// Per-path engine derived from (seed, path index): path sets are
// order-independent and safe to generate concurrently.
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t idx) {
    std::uint64_t s = seed ^ (0x100000001b3ULL * (idx + 1));
    const std::uint64_t a = splitmix64(s), b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

void check_config(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (cfg.n_paths < 1) throw ConfigError("n_paths must be at least 1");
}

int thread_count(const SimConfig& cfg, std::size_t n_paths) {
    int t = cfg.n_threads > 0 ? cfg.n_threads
                              : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    return static_cast<int>(std::min<std::size_t>(t, n_paths));
}

void run_blocks(int threads, std::size_t n, const std::function<void(std::size_t, std::size_t)>& work) {
    if (threads <= 1) {
        work(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
}

} // namespace

bool PathRecord::stopped() const { return std::isfinite(tau); }

std::vector<PathRecord> simulate(const PrimalSolution& sol, const SimConfig& cfg) {
    check_config(cfg);
    const ModelParams& p = sol.pb.params;
    const DerivedConstants& dc = sol.pb.dc;
    const auto m0 = invert_multiplier(p.x0, sol);

    const double drift = (p.gamma - p.r - 0.5 * dc.theta * dc.theta) * cfg.dt;
    const double vol = -dc.theta * std::sqrt(cfg.dt);
    const double log_zbar = std::log(sol.z_bar);
    const double x_bar = -v_eval(sol.z_bar * (1.0 - 1e-13), sol).d1;
    const double log_zhat = std::log(sol.z_hat);
    const double log_zhat_pb =
        sol.pb.bounded() ? std::log(sol.pb.z_hat_pb)
                         : std::numeric_limits<double>::infinity();
    const std::size_t n_steps =
        static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));

    // post-jump dual restart: alpha(x_bar - F) = -v_PB'(z); identical for
    // every stopped path
    auto pb_state_for = [&](double wealth) {
        auto f = [&](double z) { return -v_pb_eval(z, sol.pb).d1 - wealth; };
        double hi = sol.pb.bounded() ? sol.pb.z_hat_pb : 1e12;
        if (wealth <= 0.0) return hi;
        double lo = hi * 1e-6;
        while (f(lo) < 0.0 && lo > 1e-280) lo *= 1e-2;
        return brent(f, lo, hi);
    };
    const double log_zpb_after_crossing =
        m0.immediate_bankruptcy ? 0.0 : std::log(pb_state_for(p.alpha * (x_bar - p.F)));

    std::vector<PathRecord> out(cfg.n_paths);
    auto work = [&](std::size_t lo, std::size_t hi) {
        std::normal_distribution<double> ndist;
        for (std::size_t ip = lo; ip < hi; ++ip) {
            auto eng = path_engine(cfg.seed, ip);
            PathRecord rec;
            rec.tau = kNaN;
            rec.x_at_tau = kNaN;
            rec.x_post_jump = kNaN;

            bool post = false;
            double log_z;
            if (m0.immediate_bankruptcy) {
                rec.tau = 0.0;
                rec.x_at_tau = p.x0;
                rec.x_post_jump = p.alpha * (p.x0 - p.F);
                post = true;
                log_z = std::log(m0.lambda_star);
            } else {
                log_z = std::log(m0.lambda_star);
            }

            auto record = [&](double t) {
                const double z = std::exp(log_z);
                const Controls c = controls_at(z, sol,
                                               post ? ControlRegime::post_bankruptcy
                                                    : ControlRegime::pre_bankruptcy);
                rec.times.push_back(t);
                rec.z_path.push_back(z);
                rec.x_path.push_back(c.x);
                rec.c_path.push_back(c.c);
                rec.l_path.push_back(c.l);
                rec.pi_path.push_back(c.pi);
                rec.regime.push_back(post ? 1 : 0);
            };
            record(0.0);

            for (std::size_t s = 0; s < n_steps; ++s) {
                const double t_next = (s + 1) * cfg.dt;
                const double xi = ndist(eng);
                double log_zn = log_z + drift + vol * xi;
                if (!post) {
                    if (sol.regime == Regime::liquidity_first)
                        log_zn = std::min(log_zn, log_zhat);
                    if (log_zn >= log_zbar) {
                        const double fr = (log_zbar - log_z) / (log_zn - log_z);
                        rec.tau = (s + fr) * cfg.dt;
                        rec.x_at_tau = x_bar;
                        rec.x_post_jump = p.alpha * (x_bar - p.F);
                        post = true;
                        log_zn = log_zpb_after_crossing;
                    }
                } else {
                    log_zn = std::min(log_zn, log_zhat_pb);
                }
                log_z = log_zn;
                if ((s + 1) % cfg.record_stride == 0 || s + 1 == n_steps)
                    record(t_next);
            }
            out[ip] = std::move(rec);
        }
    };
    run_blocks(thread_count(cfg, cfg.n_paths), cfg.n_paths, work);
    return out;
}

BudgetCheck budget_check(const PrimalSolution& sol, const SimConfig& cfg,
                         double consumption_scale) {
    check_config(cfg);
    const ModelParams& p = sol.pb.params;
    const DerivedConstants& dc = sol.pb.dc;
    const auto m0 = invert_multiplier(p.x0, sol);

    BudgetCheck bc{};
    bc.n_paths = cfg.n_paths;

    if (m0.immediate_bankruptcy) {
        // tau = 0: the deflated budget is H(0) x0 with no flow, exactly x0
        bc.mean = p.x0;
        bc.estimate = 0.0;
        bc.std_error = 0.0;
        bc.fraction_stopped = 1.0;
        return bc;
    }
    if (sol.two_piece || sol.regime != Regime::bankruptcy_first)
        throw ConfigError("budget_check: fast kernel requires the single-branch "
                          "pre-bankruptcy regime");

    kernels::BudgetStepParams sp{};
    sp.drift_z = (p.gamma - p.r - 0.5 * dc.theta * dc.theta) * cfg.dt;
    sp.vol = -dc.theta * std::sqrt(cfg.dt);
    sp.gamma = p.gamma;
    sp.dt = cfg.dt;
    sp.log_zbar = std::log(sol.z_bar);
    sp.log_lambda = std::log(m0.lambda_star);
    sp.bridge_coef = 2.0 / (dc.theta * dc.theta * cfg.dt);
    sp.flow_pow = dc.beta1 - 1.0; // consumption exponent 1/(delta(1-k)-1)
    sp.flow_coef = consumption_scale * dc.c_coef_lo;
    sp.flow_const = p.d + p.w * p.L - p.w * p.L_bar;
    sp.x_bar = -v_eval(sol.z_bar * (1.0 - 1e-13), sol).d1;

    const std::size_t n_steps =
        static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));
    const auto step = kernels::budget_step(cfg.backend);

    std::vector<double> estimates(cfg.n_paths);
    std::vector<std::uint8_t> stopped(cfg.n_paths, 0);

    auto work = [&](std::size_t lo, std::size_t hi) {
        const std::size_t count = hi - lo;
        kernels::BudgetBatch batch;
        batch.init(count, sp);
        std::vector<std::mt19937_64> eng;
        eng.reserve(count);
        for (std::size_t i = 0; i < count; ++i) eng.push_back(path_engine(cfg.seed, lo + i));
        std::vector<std::normal_distribution<double>> ndist(count);
        std::uniform_real_distribution<double> udist;
        std::vector<double> normals(batch.log_z.size(), 0.0);
        std::vector<double> uniforms(batch.log_z.size(), 0.0);

        std::size_t live = count;
        for (std::size_t s = 0; s < n_steps && live > 0; ++s) {
            for (std::size_t i = 0; i < count; ++i) {
                if (!batch.alive[i]) continue;
                normals[i] = ndist[i](eng[i]);
                uniforms[i] = udist(eng[i]);
            }
            live = step(batch, sp, s * cfg.dt, normals.data(), uniforms.data());
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (batch.alive[i]) {
                // not stopped within the horizon: optional-stopping truncation
                // H(T) X(T) with X = -v'(Z)
                const double z = std::exp(batch.log_z[i]);
                const double H = kernels::detail::exp_scalar(
                    batch.log_z[i] - sp.log_lambda - p.gamma * cfg.horizon);
                estimates[lo + i] = batch.acc[i] + H * (-v_eval(z, sol).d1);
            } else {
                estimates[lo + i] = batch.estimate[i];
                stopped[lo + i] = 1;
            }
        }
    };
    run_blocks(thread_count(cfg, cfg.n_paths), cfg.n_paths, work);

    double sum = 0.0;
    for (double e : estimates) sum += e;
    bc.mean = sum / cfg.n_paths;
    double ss = 0.0;
    for (double e : estimates) ss += (e - bc.mean) * (e - bc.mean);
    bc.std_error = std::sqrt(ss / (cfg.n_paths - 1.0) / cfg.n_paths);
    bc.estimate = bc.mean - p.x0;
    std::size_t ns = 0;
    for (auto s : stopped) ns += s;
    bc.fraction_stopped = double(ns) / cfg.n_paths;
    return bc;
}

WealthGapPair wealth_sde_gap(const PrimalSolution& sol, double dt,
                             std::size_t n_paths, std::uint64_t seed,
                             double horizon) {
    const ModelParams& p = sol.pb.params;
    const DerivedConstants& dc = sol.pb.dc;
    const auto m0 = invert_multiplier(p.x0, sol);
    if (m0.immediate_bankruptcy)
        throw ConfigError("wealth_sde_gap: start above the bankruptcy threshold");

    const double theta = dc.theta;
    const double fine_dt = 0.5 * dt;
    const std::size_t n_fine = static_cast<std::size_t>(std::llround(horizon / fine_dt));

    WealthGapPair out{0.0, 0.0};
    std::vector<double> dB(n_fine);
    std::normal_distribution<double> ndist;

    for (std::size_t ip = 0; ip < n_paths; ++ip) {
        auto eng = path_engine(seed, ip);
        const double sq = std::sqrt(fine_dt);
        for (auto& b : dB) b = sq * ndist(eng);

        for (int level = 0; level < 2; ++level) {
            const double step_dt = level == 0 ? dt : fine_dt;
            const std::size_t agg = level == 0 ? 2 : 1;
            const std::size_t n_steps = n_fine / agg;
            double log_z = std::log(m0.lambda_star);
            double x = p.x0;
            double gap = 0.0;
            for (std::size_t s = 0; s < n_steps; ++s) {
                const double z = std::exp(log_z);
                if (z >= sol.z_bar) break;
                double db = 0.0;
                for (std::size_t j = 0; j < agg; ++j) db += dB[s * agg + j];

                const Jet3 jv = v_eval(z, sol);
                const Controls c = controls_at(z, sol);
                const double drift_x =
                    p.r * x + c.pi * (p.mu - p.r) - c.c - p.d + p.w * (p.L_bar - c.l);
                // Milstein cross term: d(sigma pi)/dZ * sigma_Z
                const double mil =
                    0.5 * theta * theta * (db * db - step_dt) * (-jv.d2 * z - jv.d3 * z * z);
                x += drift_x * step_dt + p.sigma * c.pi * db + mil;

                log_z += (p.gamma - p.r - 0.5 * theta * theta) * step_dt - theta * db;
                const double zn = std::exp(log_z);
                if (zn < sol.z_bar)
                    gap = std::max(gap, std::abs(x - (-v_eval(zn, sol).d1)));
            }
            (level == 0 ? out.gap_coarse : out.gap_fine) =
                std::max(level == 0 ? out.gap_coarse : out.gap_fine, gap);
        }
    }
    return out;
}

} // namespace bankopt

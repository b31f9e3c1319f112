#include "robustpower/experiment.hpp"

#include "robustpower/cvar.hpp"
#include "robustpower/error.hpp"
#include "robustpower/tables.hpp"
#include "robustpower/utility.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace robustpower {

namespace {

constexpr std::size_t kCdfPoints = 201;
constexpr std::size_t kBatches = 20;

UtilityKind utility_of(const Scenario& sc) {
    if (sc.solver.utility == UtilityType::ProportionalFairness)
        return UtilityKind::proportional_fairness();
    std::vector<double> w;
    for (const auto& t : sc.terminals) w.push_back(t.weight);
    return UtilityKind::sumrate(std::move(w));
}

// Keeps only what the outputs need: the learning-phase rates, the last
// `instances` powers and the tail columns.
class Collector {
public:
    Collector(const Scenario& sc, bool keep_tables)
        : n_(sc.size()),
          iterations_(sc.solver.iterations),
          tail_from_(tail_begin(sc.solver.iterations) + 1),
          instances_from_(iterations_ > sc.instances ? iterations_ - sc.instances + 1 : 1),
          learning_(keep_tables ? std::min(sc.learning_steps, iterations_) : 0),
          keep_tables_(keep_tables),
          tail_p_(n_),
          tail_r_(n_),
          z_sum_(n_, 0.0) {
        const std::size_t tail = iterations_ - tail_from_ + 1;
        for (auto& c : tail_p_) c.reserve(tail);
        for (auto& c : tail_r_) c.reserve(tail);
        sum_p_.reserve(tail);
    }

    void operator()(const IterationRecord& rec) {
        if (rec.t <= learning_) learning_r_.insert(learning_r_.end(), rec.rates.begin(), rec.rates.end());
        if (keep_tables_ && rec.t >= instances_from_) {
            instance_t_.push_back(rec.t);
            instance_p_.insert(instance_p_.end(), rec.p.begin(), rec.p.end());
        }
        if (rec.t < tail_from_) return;
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            tail_p_[i].push_back(rec.p[i]);
            tail_r_[i].push_back(rec.rates[i]);
            z_sum_[i] += rec.z[i];
            s += rec.p[i];
        }
        sum_p_.push_back(s);
    }

    std::size_t n_, iterations_, tail_from_, instances_from_, learning_;
    bool keep_tables_;
    std::vector<std::vector<double>> tail_p_, tail_r_;
    std::vector<double> z_sum_, sum_p_;
    std::vector<double> learning_r_;
    std::vector<std::size_t> instance_t_;
    std::vector<double> instance_p_;
};

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    const double m = sample_mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / double(x.size() - 1);
}

// Standard error of the mean of u from non-overlapping batch means.
double batch_means_se(const std::vector<double>& u) {
    const std::size_t b = u.size() / kBatches;
    if (b == 0) return 0.0;
    std::vector<double> means;
    for (std::size_t k = 0; k < kBatches; ++k)
        means.push_back(std::accumulate(u.begin() + k * b, u.begin() + (k + 1) * b, 0.0) /
                        double(b));
    return std::sqrt(sample_variance(means) / double(kBatches));
}

RunStats summarize(const Scenario& sc, const Collector& c, RunOutcome outcome) {
    RunStats s;
    const std::size_t n = sc.size();
    s.tail_samples = c.sum_p_.size();
    s.outcome = std::move(outcome);
    for (std::size_t i = 0; i < n; ++i) {
        s.mean_p.push_back(sample_mean(c.tail_p_[i]));
        s.mean_rate.push_back(sample_mean(c.tail_r_[i]));
        s.mean_z.push_back(c.z_sum_[i] / double(s.tail_samples));
        s.cvar_p.push_back(empirical_cvar(c.tail_p_[i], sc.terminals[i].phi));
    }
    s.sum_cvar_p = std::accumulate(s.cvar_p.begin(), s.cvar_p.end(), 0.0);
    s.sum_mean_p = std::accumulate(s.mean_p.begin(), s.mean_p.end(), 0.0);
    s.var_sum_p = sample_variance(c.sum_p_);
    s.average_rate =
        std::accumulate(s.mean_rate.begin(), s.mean_rate.end(), 0.0) / double(n);

    const auto utility = utility_of(sc);
    s.utility = utility_value(utility, s.mean_rate);
    // Linearize the utility at the tail means for the error estimate.
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i)
        grad[i] = utility.type() == UtilityType::Sumrate ? utility.weights()[i]
                                                         : 1.0 / s.mean_rate[i];
    std::vector<double> u(s.tail_samples, 0.0);
    for (std::size_t k = 0; k < s.tail_samples; ++k)
        for (std::size_t i = 0; i < n; ++i) u[k] += grad[i] * c.tail_r_[i][k];
    s.utility_se = batch_means_se(u);
    return s;
}

std::vector<std::string> numbered(const std::string& first, const std::string& stem,
                                  std::size_t n, const std::string& last = {}) {
    std::vector<std::string> h{first};
    for (std::size_t i = 1; i <= n; ++i) h.push_back(stem + std::to_string(i));
    if (!last.empty()) h.push_back(last);
    return h;
}

void write_cdf(const std::vector<std::vector<double>>& columns, const std::string& x_name,
               const std::string& stem, const std::filesystem::path& path) {
    const std::size_t n = columns.size();
    std::vector<std::vector<double>> sorted = columns;
    double top = 0.0;
    for (auto& c : sorted) {
        std::sort(c.begin(), c.end());
        if (!c.empty()) top = std::max(top, c.back());
    }
    TextTable table(numbered(x_name, stem, n));
    for (std::size_t k = 0; k < kCdfPoints; ++k) {
        const double x = top * double(k) / double(kCdfPoints - 1);
        std::vector<double> row{x};
        for (const auto& c : sorted) {
            const auto below = std::upper_bound(c.begin(), c.end(), x) - c.begin();
            row.push_back(c.empty() ? 0.0 : double(below) / double(c.size()));
        }
        table.add_row(row);
    }
    table.write(path);
}

void write_tables(const Scenario& sc, const Collector& c, const RunStats& s,
                  const std::filesystem::path& dir) {
    const std::size_t n = sc.size();

    TextTable inst(numbered("time", "p", n, "sum_p"));
    for (std::size_t k = 0; k < c.instance_t_.size(); ++k) {
        std::vector<double> row{double(c.instance_t_[k])};
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            row.push_back(c.instance_p_[k * n + i]);
            sum += c.instance_p_[k * n + i];
        }
        row.push_back(sum);
        inst.add_row(row);
    }
    inst.write(dir / "p_instances.txt");

    write_cdf(c.tail_p_, "power", "cdf_p", dir / "p_CDF.txt");
    write_cdf(c.tail_r_, "rate", "cdf_rate", dir / "rate_CDF.txt");

    // Moving average over the last min(t, window) rates.
    auto header = numbered("time_r", "cum_r", n, "sum_cum_r");
    for (std::size_t i = 1; i <= n; ++i) header.push_back("r" + std::to_string(i));
    header.push_back("window");
    TextTable learn(header);
    std::vector<double> window_sum(n, 0.0);
    const std::size_t steps = c.learning_r_.size() / n;
    for (std::size_t t = 0; t < steps; ++t) {
        const double width = double(std::min(t + 1, sc.window));
        std::vector<double> row{double(t + 1)};
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            window_sum[i] += c.learning_r_[t * n + i];
            if (t >= sc.window) window_sum[i] -= c.learning_r_[(t - sc.window) * n + i];
            row.push_back(window_sum[i] / width);
            total += window_sum[i] / width;
        }
        row.push_back(total);
        for (std::size_t i = 0; i < n; ++i) row.push_back(c.learning_r_[t * n + i]);
        row.push_back(width);
        learn.add_row(row);
    }
    learn.write(dir / "rate_instances.txt");

    TextTable summary({"terminal", "noise_var", "phi", "weight", "lambda", "mu", "z",
                       "mean_p", "mean_rate", "cvar_p", "p0"});
    const auto& duals = s.outcome.final_duals;
    const double nan = std::nan("");
    for (std::size_t i = 0; i < n; ++i) {
        const auto& t = sc.terminals[i];
        summary.add_row(std::to_string(i + 1),
                        {t.noise_var, t.phi, t.weight, duals.lambda[i], duals.mu, s.mean_z[i],
                         s.mean_p[i], s.mean_rate[i], s.cvar_p[i], sc.solver.p0});
    }
    summary.add_row("total", {nan, nan, nan, nan, duals.mu, nan, s.sum_mean_p,
                              std::accumulate(s.mean_rate.begin(), s.mean_rate.end(), 0.0),
                              s.sum_cvar_p, sc.solver.p0});
    summary.write(dir / "summary.txt");
}

RunStats execute(const Scenario& sc, const RunHooks& hooks, const std::filesystem::path* dir) {
    sc.validate();
    Collector collector(sc, dir != nullptr);
    auto outcome = run(sc.solver, sc.terminals, sc.fading,
                       [&collector](const IterationRecord& r) { collector(r); }, hooks);
    auto stats = summarize(sc, collector, std::move(outcome));
    if (dir) {
        std::filesystem::create_directories(*dir);
        write_tables(sc, collector, stats, *dir);
    }
    return stats;
}

} // namespace

RunStats simulate(const Scenario& scenario, const RunHooks& hooks) {
    return execute(scenario, hooks, nullptr);
}

RunStats run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
    return execute(scenario, {}, &out_dir);
}

SweepError::SweepError(double phi_low, double phi_high, const std::string& what)
    : std::runtime_error("grid point (phi_low = " + format_number(phi_low) +
                         ", phi_high = " + format_number(phi_high) + "): " + what),
      phi_low_(phi_low),
      phi_high_(phi_high) {}

std::vector<SurfacePoint> compute_surface(const Scenario& scenario, unsigned threads) {
    if (!scenario.sweep) throw ScenarioError("scenario '" + scenario.name + "' has no sweep grid");
    const auto& grid = *scenario.sweep;
    std::vector<SurfacePoint> points;
    for (double l : grid.phi_low)
        for (double h : grid.phi_high) points.push_back({l, h, 0.0});

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, unsigned(points.size()));

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::size_t error_index = points.size();

    auto worker = [&] {
        for (std::size_t k = next++; k < points.size(); k = next++) {
            try {
                auto sc = scenario.with_group_phi(points[k].phi_low, points[k].phi_high);
                points[k].rate = simulate(sc).average_rate;
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (k < error_index) {
                    error_index = k;
                    error = std::current_exception();
                }
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
        worker();
    }
    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const std::exception& e) {
            throw SweepError(points[error_index].phi_low, points[error_index].phi_high, e.what());
        }
    }
    return points;
}

std::vector<SurfacePoint> sweep_surface(const Scenario& scenario,
                                        const std::filesystem::path& out_dir, unsigned threads) {
    auto points = compute_surface(scenario, threads);
    std::filesystem::create_directories(out_dir);
    TextTable table({"x", "y", "z"});
    const std::size_t cols = scenario.sweep->phi_high.size();
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (k > 0 && k % cols == 0) table.add_blank_line();
        table.add_row({points[k].phi_low, points[k].phi_high, points[k].rate});
    }
    table.write(out_dir / "surface.txt");
    return points;
}

} // namespace robustpower

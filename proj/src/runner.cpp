#include "fracfp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "fracfp/analysis.hpp"
#include "fracfp/catalog.hpp"
#include "fracfp/report.hpp"
#include "fracfp/timestep.hpp"

namespace fracfp::runner {
namespace {

namespace an = analysis;
namespace cat = catalog;
namespace fem = fem1d;
namespace rpt = report;
namespace ts = timestep;
using config::ExperimentConfig;

fem::CoefficientField make_fields(const ExperimentConfig& cfg) {
    fem::CoefficientField f;
    f.kappa = cat::make_kappa(cfg.kappa, cfg.x_left, cfg.x_right);
    f.kappa_min = cat::kappa_min(cfg.kappa);
    f.F = cat::make_f(cfg.F, cfg.x_left, cfg.x_right);
    f.F_bound = cat::f_bound(cfg.F);
    // every catalog drift is steady in time
    f.Fdot = [](double, double) { return 0.0; };
    f.Fdot_bound = 0.0;
    f.g = cat::make_g(cfg.g, cfg.x_left, cfg.x_right);
    return f;
}

ts::SchemeConfig make_scheme(const ExperimentConfig& cfg) {
    ts::SchemeConfig scheme{
        cfg.alpha,
        ts::TimePartition::graded(cfg.T, cfg.N, config::effective_gamma(cfg)),
        cfg.p,
        fem::FeSpace{fem::Mesh1D::uniform(cfg.x_left, cfg.x_right, cfg.M)}};
    scheme.fields = make_fields(cfg);
    scheme.u0 = cat::make_u0(cfg.u0, cfg.x_left, cfg.x_right);
    scheme.u0_prime = cat::make_u0_deriv(cfg.u0, cfg.x_left, cfg.x_right);
    return scheme;
}

std::string case_label(const ExperimentConfig& cfg) {
    return "u0:" + cfg.u0 + " g:" + cfg.g;
}

void run_solve(const ExperimentConfig& cfg, rpt::RunReport& out) {
    const auto scheme = make_scheme(cfg);
    const bool drift = cfg.F != "zero";
    const auto sol =
        drift ? ts::solve_general_F(scheme) : ts::dg_solve_diffusion(scheme);
    const auto acct = ts::jump_and_boundary_accounting(sol, scheme.space);
    rpt::Table table;
    table.name = "solve";
    table.columns = {"n", "t", "end_norm", "jump_norm", "memory_increment"};
    double max_jump = 0.0;
    for (int n = 0; n <= sol.steps(); ++n) {
        const double jump =
            n < sol.steps() ? acct.jump_norms[static_cast<std::size_t>(n)]
                            : 0.0;
        const double mem =
            (n >= 1 && !sol.memory_increments.empty())
                ? sol.memory_increments[static_cast<std::size_t>(n - 1)]
                : 0.0;
        max_jump = std::max(max_jump, jump);
        table.rows.push_back({rpt::cell(n), rpt::cell(scheme.partition.t[n]),
                              rpt::cell(acct.end_norms[n]), rpt::cell(jump),
                              rpt::cell(mem)});
    }
    out.tables.push_back(std::move(table));
    out.summary.push_back(rpt::summary_text(
        "scheme", drift ? "product-integration" : "dg"));
    out.summary.push_back(
        rpt::summary_number("final_end_norm", acct.end_norms.back()));
    out.summary.push_back(rpt::summary_number("max_jump", max_jump));
    out.pass = true;  // a completed solve carries no assertions
}

// Sweep over the alpha grid, one preassigned slot per grid value so that
// concurrent execution cannot reorder the report.
an::StabilityReport run_sweep_grid(const ExperimentConfig& cfg,
                                   const ts::SchemeConfig& base,
                                   const std::vector<an::DataCase>& cases,
                                   bool gradient, double t_star, int jobs) {
    const auto& grid = cfg.alpha_grid;
    auto one = [&](double alpha) {
        const std::vector<double> single{alpha};
        return gradient ? an::gradient_sweep(base, single, cases, t_star)
                        : an::stability_sweep(base, single, cases);
    };
    const int workers =
        std::min<int>(jobs, static_cast<int>(grid.size()));
    std::vector<an::StabilityReport> slots(grid.size());
    if (workers <= 1) {
        return gradient ? an::gradient_sweep(base, grid, cases, t_star)
                        : an::stability_sweep(base, grid, cases);
    }
    std::vector<std::exception_ptr> errors(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) break;
            try {
                slots[i] = one(grid[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    an::StabilityReport merged = slots.front();
    for (std::size_t i = 1; i < slots.size(); ++i)
        merged.records.insert(merged.records.end(), slots[i].records.begin(),
                              slots[i].records.end());
    return merged;
}

// nonempty result identifies the first failing case
std::string run_sweep(const ExperimentConfig& cfg, bool gradient,
                      rpt::RunReport& out, int jobs) {
    const auto base = make_scheme(cfg);
    std::vector<an::DataCase> cases(1);
    cases[0].label = case_label(cfg);
    cases[0].u0 = cat::make_u0(cfg.u0, cfg.x_left, cfg.x_right);
    cases[0].u0_prime = cat::make_u0_deriv(cfg.u0, cfg.x_left, cfg.x_right);
    cases[0].g = cat::make_g(cfg.g, cfg.x_left, cfg.x_right);
    const double t_star = config::effective_t_star(cfg);
    const auto sweep =
        run_sweep_grid(cfg, base, cases, gradient, t_star, jobs);

    rpt::Table table;
    table.name = gradient ? "gradient" : "stability";
    table.columns = {"alpha", "label", "measure", "functional", "ratio"};
    std::string failure;
    double ratio_min = 0.0, ratio_max = 0.0;
    bool have_ratio = false, finite = true;
    for (const auto& rec : sweep.records) {
        table.rows.push_back({rpt::cell(rec.alpha), rec.label,
                              rpt::cell(rec.measure), rpt::cell(rec.functional),
                              rpt::cell(rec.ratio)});
        if (!rec.error.empty() && failure.empty()) {
            std::ostringstream msg;
            msg << table.name << "-sweep case alpha=" << rec.alpha << " ("
                << rec.label << ") failed: " << rec.error;
            failure = msg.str();
        }
        if (!std::isfinite(rec.ratio)) finite = false;
        if (rec.error.empty()) {
            ratio_min = have_ratio ? std::min(ratio_min, rec.ratio) : rec.ratio;
            ratio_max = have_ratio ? std::max(ratio_max, rec.ratio) : rec.ratio;
            have_ratio = true;
        }
    }
    out.tables.push_back(std::move(table));
    out.summary.push_back(rpt::summary_number("ratio_min", ratio_min));
    out.summary.push_back(rpt::summary_number("ratio_max", ratio_max));
    if (have_ratio && ratio_min > 0.0)
        out.summary.push_back(rpt::summary_number("ratio_max_over_min",
                                                  ratio_max / ratio_min));
    if (gradient)
        out.summary.push_back(rpt::summary_number("t_star", t_star));
    out.summary.push_back(rpt::summary_number("dof", sweep.dof));
    out.summary.push_back(rpt::summary_number("max_h", sweep.max_h));
    out.summary.push_back(rpt::summary_boolean("drift", sweep.drift));
    out.pass = failure.empty() && finite;
    return failure;
}

void run_energy(const ExperimentConfig& cfg, rpt::RunReport& out) {
    const auto scheme = make_scheme(cfg);
    const auto sol = ts::dg_solve_diffusion(scheme);
    const auto ledger = an::energy_check(sol, scheme);
    rpt::Table table;
    table.name = "energy";
    table.columns = {"n", "t", "end_sq", "jump_sq", "memory", "rhs", "slack"};
    for (std::size_t i = 0; i < ledger.times.size(); ++i)
        table.rows.push_back({rpt::cell(static_cast<int>(i) + 1),
                              rpt::cell(ledger.times[i]),
                              rpt::cell(ledger.end_sq[i]),
                              rpt::cell(ledger.jump_sq[i]),
                              rpt::cell(ledger.memory[i]),
                              rpt::cell(ledger.rhs[i]),
                              rpt::cell(ledger.slack[i])});
    out.tables.push_back(std::move(table));
    out.summary.push_back(rpt::summary_number("initial_sq", ledger.initial_sq));
    out.summary.push_back(
        rpt::summary_number("worst_slack", ledger.worst_slack));
    out.summary.push_back(rpt::summary_number("scale", ledger.scale));
    out.pass = ledger.pass;
}

void run_convergence(const ExperimentConfig& cfg, rpt::RunReport& out) {
    const ts::ModalExpansion modes{cat::kappa_constant(cfg.kappa), cfg.x_left,
                                   cfg.x_right, cat::u0_amplitudes(cfg.u0)};
    const auto fine =
        ts::TimePartition::graded(cfg.T, cfg.N, config::effective_gamma(cfg));
    const auto rates = an::convergence_study(
        cfg.alpha, modes, cfg.mesh_family, fine, config::effective_t_star(cfg));
    rpt::Table table;
    table.name = "convergence";
    table.columns = {"h", "err_l2", "err_h1"};
    for (std::size_t i = 0; i < rates.h.size(); ++i)
        table.rows.push_back({rpt::cell(rates.h[i]), rpt::cell(rates.err_l2[i]),
                              rpt::cell(rates.err_h1[i])});
    out.tables.push_back(std::move(table));
    const bool l2_ok = rates.slope_l2 >= 1.8 && rates.slope_l2 <= 2.2;
    const bool h1_ok = rates.slope_h1 >= 0.8 && rates.slope_h1 <= 1.2;
    out.summary.push_back(rpt::summary_number("slope_l2", rates.slope_l2));
    out.summary.push_back(rpt::summary_number("slope_h1", rates.slope_h1));
    out.summary.push_back(rpt::summary_text("band_l2", "[1.8, 2.2]"));
    out.summary.push_back(rpt::summary_text("band_h1", "[0.8, 1.2]"));
    out.summary.push_back(rpt::summary_boolean("temporal_contamination",
                                               rates.temporal_contamination));
    out.pass = l2_ok && h1_ok && !rates.temporal_contamination;
}

void run_lemmas(const ExperimentConfig& cfg, rpt::RunReport& out) {
    const auto suite = an::lemma_property_suite(cfg.seed, cfg.trials);
    rpt::Table table;
    table.name = "lemmas";
    table.columns = {"name", "trials", "worst_slack", "scale", "pass"};
    for (const auto& check : suite.checks)
        table.rows.push_back({check.name, rpt::cell(check.trials),
                              rpt::cell(check.worst_slack),
                              rpt::cell(check.scale),
                              rpt::cell(static_cast<int>(check.pass))});
    out.tables.push_back(std::move(table));
    out.summary.push_back(
        rpt::summary_number("checks", static_cast<double>(suite.checks.size())));
    out.pass = suite.pass;
}

}  // namespace

std::string catalog_text() {
    std::ostringstream out;
    auto section = [&out](const std::string& slot,
                          const std::vector<cat::Entry>& entries) {
        out << slot << ":\n";
        for (const auto& e : entries) {
            std::string id = slot + ":" + e.id;
            out << "  " << id << std::string(id.size() < 14 ? 14 - id.size() : 1, ' ')
                << e.description << "\n";
        }
    };
    out << "coefficient catalog (xi = normalized coordinate on the domain)\n\n";
    section("u0", cat::u0_entries());
    out << "\n";
    section("g", cat::g_entries());
    out << "\n";
    section("F", cat::f_entries());
    out << "\n";
    section("kappa", cat::kappa_entries());
    out << "  kappa:<number>  any positive constant, e.g. kappa = 2.5\n";
    return out.str();
}

int run_experiment(const config::ExperimentConfig& cfg,
                   const std::string& out_dir, int jobs, std::ostream& log) {
    if (jobs < 1) throw config::ConfigError("--jobs must be at least 1");
    const auto start = std::chrono::steady_clock::now();
    rpt::RunReport rep;
    rep.kind = cfg.kind;
    rep.config_hash = config::config_hash(cfg);
    rep.config_echo = config::canonical_text(cfg);
    std::string failure;
    if (cfg.kind == "solve") {
        run_solve(cfg, rep);
    } else if (cfg.kind == "stability-sweep") {
        failure = run_sweep(cfg, false, rep, jobs);
    } else if (cfg.kind == "gradient-sweep") {
        failure = run_sweep(cfg, true, rep, jobs);
    } else if (cfg.kind == "energy-check") {
        run_energy(cfg, rep);
    } else if (cfg.kind == "convergence") {
        run_convergence(cfg, rep);
    } else if (cfg.kind == "lemma-suite") {
        run_lemmas(cfg, rep);
    } else {
        throw config::ConfigError("unknown experiment kind '" + cfg.kind + "'");
    }
    rep.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    rpt::write_all(rep, out_dir);
    log << cfg.kind << " " << rep.config_hash << ": "
        << (rep.pass ? "pass" : "FAIL") << ", report in " << out_dir << "\n";
    if (!failure.empty()) throw std::runtime_error(failure);
    return rep.pass ? 0 : 1;
}

}  // namespace fracfp::runner

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>

#include "doctest.h"
#include "fracfp/catalog.hpp"
#include "fracfp/config.hpp"

namespace cfg = fracfp::config;
namespace cat = fracfp::catalog;

namespace {

const char* kSolveText = R"([experiment]
kind = "solve"
seed = 7

[domain]
x_left = 0
x_right = 1

[fields]
kappa = "const1"
F = "zero"
g = "tsin"   # forcing ramps up from zero
u0 = "sin1"

[grid]
M = 31
N = 32
T = 0.5
p = 1
alpha = 0.5
)";

std::string sweep_text(const std::string& grid_value) {
    return "[experiment]\nkind = \"stability-sweep\"\n\n[fields]\nu0 = sin1\n"
           "\n[grid]\nM = 15\nN = 16\nT = 0.2\n" +
           grid_value;
}

// empty when the text parses; the diagnostic otherwise
std::string error_of(const std::string& text) {
    try {
        cfg::parse_config_text(text, "test.toml");
        return "";
    } catch (const cfg::ConfigError& e) {
        return e.what();
    }
}

bool mentions(const std::string& err, const std::string& needle) {
    return err.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("well-formed solve config parses with defaults filled in") {
    const auto c = cfg::parse_config_text(kSolveText, "solve.toml");
    CHECK(c.kind == "solve");
    CHECK(c.seed == 7);
    CHECK(c.x_left == 0.0);
    CHECK(c.x_right == 1.0);
    CHECK(c.g == "tsin");  // inline comment stripped
    CHECK(c.u0 == "sin1");
    CHECK(c.M == 31);
    CHECK(c.N == 32);
    CHECK(c.T == 0.5);
    CHECK(c.p == 1);
    CHECK(c.alpha == 0.5);
    CHECK(c.gamma == 0.0);   // unset sentinel
    CHECK(c.t_star == 0.0);  // unset sentinel
    CHECK_FALSE(c.alpha_grid_given);
}

TEST_CASE("bare tokens, quoted strings, and arrays are all accepted") {
    const auto c = cfg::parse_config_text(
        sweep_text("alpha_grid = [0.3, 0.5, 1.0]\n"), "sweep.toml");
    CHECK(c.kind == "stability-sweep");
    CHECK(c.u0 == "sin1");  // bare token
    REQUIRE(c.alpha_grid.size() == 3);
    CHECK(c.alpha_grid[0] == 0.3);
    CHECK(c.alpha_grid[2] == 1.0);
    CHECK(c.alpha_grid_given);
}

TEST_CASE("sweep kinds default to the built-in alpha grid") {
    const auto c = cfg::parse_config_text(sweep_text(""), "sweep.toml");
    REQUIRE(c.alpha_grid.size() == 4);
    CHECK(c.alpha_grid.front() == 0.3);
    CHECK(c.alpha_grid.back() == 1.0);
    CHECK_FALSE(c.alpha_grid_given);
}

TEST_CASE("diagnostics carry the file name and line number") {
    SUBCASE("unknown key") {
        const auto err = error_of(
            "[experiment]\nkind = solve\n\n[grid]\nquadrature = 9\n");
        CHECK(mentions(err, "test.toml:5"));
        CHECK(mentions(err, "grid.quadrature"));
        CHECK(mentions(err, "solve"));
    }
    SUBCASE("unknown section") {
        const auto err = error_of("[experiment]\nkind = solve\n[output]\n");
        CHECK(mentions(err, "test.toml:3"));
        CHECK(mentions(err, "[output]"));
    }
    SUBCASE("missing equals sign") {
        const auto err = error_of("[experiment]\nkind solve\n");
        CHECK(mentions(err, "test.toml:2"));
    }
    SUBCASE("key before any section") {
        const auto err = error_of("kind = solve\n");
        CHECK(mentions(err, "test.toml:1"));
        CHECK(mentions(err, "before any [section]"));
    }
    SUBCASE("duplicate key reports both lines") {
        const auto err =
            error_of("[experiment]\nkind = solve\nkind = solve\n");
        CHECK(mentions(err, "test.toml:3"));
        CHECK(mentions(err, "line 2"));
    }
    SUBCASE("missing value") {
        const auto err = error_of("[experiment]\nkind =\n");
        CHECK(mentions(err, "test.toml:2"));
        CHECK(mentions(err, "no value"));
    }
    SUBCASE("non-numeric where a number is required") {
        const auto err = error_of(
            "[experiment]\nkind = solve\n\n[grid]\nT = soon\n");
        CHECK(mentions(err, "test.toml:5"));
        CHECK(mentions(err, "grid.T"));
    }
    SUBCASE("array where a scalar is required") {
        const auto err = error_of(
            "[experiment]\nkind = solve\n\n[grid]\nalpha = [0.5, 1.0]\n");
        CHECK(mentions(err, "test.toml:5"));
    }
}

TEST_CASE("experiment kind is required and checked") {
    CHECK(mentions(error_of("[experiment]\nseed = 1\n"), "experiment.kind"));
    CHECK(mentions(error_of("[experiment]\nkind = warp\n"),
                   "unknown experiment kind 'warp'"));
}

TEST_CASE("per-kind allowlists reject keys from other experiment kinds") {
    CHECK(mentions(
        error_of("[experiment]\nkind = solve\n\n[grid]\nalpha_grid = [0.5]\n"),
        "grid.alpha_grid"));
    CHECK(mentions(error_of("[experiment]\nkind = lemma-suite\n\n[domain]\n"
                            "x_left = 0\n"),
                   "domain.x_left"));
    CHECK(mentions(error_of("[experiment]\nkind = stability-sweep\n\n[grid]\n"
                            "t_star = 0.1\n"),
                   "grid.t_star"));
    CHECK(mentions(error_of("[experiment]\nkind = convergence\n\n[fields]\n"
                            "g = tsin\n"),
                   "fields.g"));
    // the same key is fine for the kind that owns it
    CHECK(error_of("[experiment]\nkind = gradient-sweep\n\n[grid]\n"
                   "t_star = 0.1\n") == "");
}

TEST_CASE("semantic validation rejects out-of-range values") {
    auto solve_with = [](const std::string& grid) {
        return error_of("[experiment]\nkind = solve\n\n[grid]\n" + grid);
    };
    CHECK(mentions(solve_with("M = 0\n"), "grid.M"));
    CHECK(mentions(solve_with("N = 0\n"), "grid.N"));
    CHECK(mentions(solve_with("T = 0\n"), "grid.T"));
    CHECK(mentions(solve_with("T = -1\n"), "grid.T"));
    CHECK(mentions(solve_with("gamma = 0.5\n"), "grid.gamma"));
    CHECK(mentions(solve_with("p = 2\n"), "grid.p"));
    CHECK(mentions(solve_with("alpha = 0\n"), "grid.alpha"));
    CHECK(mentions(solve_with("alpha = 1.5\n"), "grid.alpha"));
    CHECK(mentions(error_of("[experiment]\nkind = solve\n\n[domain]\n"
                            "x_left = 2\nx_right = 1\n"),
                   "x_left"));
    CHECK(mentions(error_of("[experiment]\nkind = gradient-sweep\n\n[grid]\n"
                            "T = 0.5\nt_star = 0.6\n"),
                   "t_star"));
    CHECK(mentions(error_of("[experiment]\nkind = lemma-suite\n\n[grid]\n"
                            "trials = 0\n"),
                   "trials"));
}

TEST_CASE("alpha grid entries must lie in the sweepable band") {
    CHECK(mentions(error_of(sweep_text("alpha_grid = [0.05, 0.5]\n")),
                   "[0.1, 1]"));
    CHECK(mentions(error_of(sweep_text("alpha_grid = [0.5, 1.2]\n")),
                   "[0.1, 1]"));
    CHECK(mentions(error_of(sweep_text("alpha_grid = []\n")),
                   "alpha grid is empty"));
}

TEST_CASE("catalog identifiers are validated at parse time") {
    CHECK(mentions(error_of("[experiment]\nkind = solve\n\n[fields]\n"
                            "u0 = blob\n"),
                   "u0"));
    CHECK(mentions(error_of("[experiment]\nkind = solve\n\n[fields]\n"
                            "kappa = \"-2\"\n"),
                   "kappa"));
    // numeric kappa literal is allowed
    CHECK(error_of("[experiment]\nkind = solve\n\n[fields]\nkappa = 2.5\n") ==
          "");
}

TEST_CASE("energy-check rejects a drift field") {
    CHECK(mentions(error_of("[experiment]\nkind = energy-check\n\n[fields]\n"
                            "F = const1\n"),
                   "energy-check requires F"));
    CHECK(error_of("[experiment]\nkind = energy-check\n\n[fields]\n"
                   "F = zero\nu0 = sin1\n") == "");
}

TEST_CASE("convergence requires constant kappa and a modal profile") {
    CHECK(mentions(error_of("[experiment]\nkind = convergence\n\n[fields]\n"
                            "kappa = ramp\nu0 = sin1\n"),
                   "constant kappa"));
    CHECK(mentions(error_of("[experiment]\nkind = convergence\n\n[fields]\n"
                            "u0 = parabola\n"),
                   "sine-mode"));
    CHECK(mentions(error_of("[experiment]\nkind = convergence\n\n[grid]\n"
                            "mesh_family = [15, 15]\n"),
                   "strictly increasing"));
    CHECK(error_of("[experiment]\nkind = convergence\n\n[fields]\n"
                   "u0 = sin3\n\n[grid]\nmesh_family = [7, 15]\n") == "");
}

TEST_CASE("overrides replace the grid and seed, then re-validate") {
    auto c = cfg::parse_config_text(sweep_text(""), "sweep.toml");
    cfg::apply_overrides(c, std::string("0.3, 0.7,1.0"), std::uint64_t{99});
    CHECK(c.seed == 99);
    REQUIRE(c.alpha_grid.size() == 3);
    CHECK(c.alpha_grid[1] == 0.7);
    CHECK(c.alpha_grid_given);

    SUBCASE("empty override list fails validation") {
        CHECK_THROWS_AS(cfg::apply_overrides(c, std::string(""), std::nullopt),
                        cfg::ConfigError);
    }
    SUBCASE("malformed entries are rejected") {
        CHECK_THROWS_AS(
            cfg::apply_overrides(c, std::string("0.3,fast"), std::nullopt),
            cfg::ConfigError);
        CHECK_THROWS_AS(
            cfg::apply_overrides(c, std::string("0.3,,0.7"), std::nullopt),
            cfg::ConfigError);
    }
    SUBCASE("out-of-band entries are rejected") {
        CHECK_THROWS_AS(
            cfg::apply_overrides(c, std::string("0.01"), std::nullopt),
            cfg::ConfigError);
    }
    SUBCASE("alpha-grid override is meaningless outside sweeps") {
        auto s = cfg::parse_config_text(kSolveText, "solve.toml");
        CHECK_THROWS_AS(
            cfg::apply_overrides(s, std::string("0.5"), std::nullopt),
            cfg::ConfigError);
        // seed-only override is fine anywhere
        cfg::apply_overrides(s, std::nullopt, std::uint64_t{3});
        CHECK(s.seed == 3);
    }
}

TEST_CASE("effective gamma and t_star follow the documented defaults") {
    auto c = cfg::parse_config_text(kSolveText, "solve.toml");
    CHECK(cfg::effective_gamma(c) == 4.0);  // min(2 / 0.5, 4)
    c.alpha = 0.8;
    CHECK(cfg::effective_gamma(c) == doctest::Approx(2.5));
    c.gamma = 1.5;
    CHECK(cfg::effective_gamma(c) == 1.5);
    CHECK(cfg::effective_t_star(c) == 0.25);  // T / 2
    c.t_star = 0.4;
    CHECK(cfg::effective_t_star(c) == 0.4);

    const auto s = cfg::parse_config_text(sweep_text(""), "sweep.toml");
    CHECK(cfg::effective_gamma(s) == 2.0);
}

TEST_CASE("canonical text round-trips and pins every effective value") {
    for (const char* text :
         {kSolveText, "[experiment]\nkind = lemma-suite\n\n[grid]\n"
                      "trials = 40\n"}) {
        const auto c = cfg::parse_config_text(text, "in.toml");
        const auto canon = cfg::canonical_text(c);
        const auto back = cfg::parse_config_text(canon, "canon.toml");
        CHECK(cfg::canonical_text(back) == canon);
        CHECK(cfg::config_hash(back) == cfg::config_hash(c));
    }
    const auto swp = cfg::parse_config_text(
        sweep_text("alpha_grid = [0.3, 0.95]\ngamma = 2\n"), "sweep.toml");
    const auto canon = cfg::canonical_text(swp);
    CHECK(mentions(canon, "alpha_grid = [0.3, 0.95]"));
    CHECK(mentions(canon, "gamma = 2"));
    const auto back = cfg::parse_config_text(canon, "canon.toml");
    CHECK(cfg::canonical_text(back) == canon);
}

TEST_CASE("config hash is 16 hex digits and tracks semantic changes") {
    auto c = cfg::parse_config_text(kSolveText, "solve.toml");
    const auto h0 = cfg::config_hash(c);
    REQUIRE(h0.size() == 16);
    for (char ch : h0) CHECK(std::isxdigit(static_cast<unsigned char>(ch)));
    const auto h_again = cfg::config_hash(c);
    CHECK(h_again == h0);
    c.seed = 8;
    CHECK(cfg::config_hash(c) != h0);
    c.seed = 7;
    c.alpha = 0.75;
    CHECK(cfg::config_hash(c) != h0);
}

TEST_CASE("catalog carries the documented entries") {
    auto has = [](const std::vector<cat::Entry>& entries,
                  const std::string& id) {
        for (const auto& e : entries)
            if (e.id == id) return true;
        return false;
    };
    CHECK(has(cat::u0_entries(), "sin1"));
    CHECK(has(cat::u0_entries(), "sin3"));
    CHECK(has(cat::u0_entries(), "parabola"));
    CHECK(has(cat::g_entries(), "tsin"));
    CHECK(has(cat::f_entries(), "const1"));
    CHECK(has(cat::kappa_entries(), "const1"));
    for (const auto& e : cat::u0_entries()) CHECK(!e.description.empty());
}

TEST_CASE("catalog factories evaluate in normalized coordinates") {
    const auto u0 = cat::make_u0("sin1", 1.0, 3.0);
    CHECK(u0(2.0) == doctest::Approx(1.0));  // midpoint of (1, 3)
    CHECK(std::abs(u0(1.0)) < 1e-15);
    const auto du = cat::make_u0_deriv("sin1", 1.0, 3.0);
    // chain rule picks up the 1 / width factor
    CHECK(du(1.0) == doctest::Approx(std::acos(-1.0) / 2.0));
    const auto g = cat::make_g("tsin", 0.0, 1.0);
    CHECK(g(0.5, 2.0) == doctest::Approx(2.0));
    const auto F = cat::make_f("const1", 0.0, 1.0);
    CHECK(F(0.3, 0.7) == 1.0);
    CHECK(cat::f_bound("const1") == 1.0);
}

TEST_CASE("kappa accepts literals and reports constants") {
    CHECK(cat::make_kappa("2.5", 0.0, 1.0)(0.3) == 2.5);
    CHECK(cat::kappa_min("2.5") == 2.5);
    CHECK(cat::kappa_is_constant("2.5"));
    CHECK(cat::kappa_constant("const2") == 2.0);
    CHECK_FALSE(cat::kappa_is_constant("ramp"));
    CHECK(cat::kappa_min("ramp") == 1.0);
    CHECK_THROWS_AS((void)cat::make_kappa("0", 0.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)cat::make_kappa("lumpy", 0.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("modal queries expose the sine amplitudes") {
    CHECK(cat::u0_is_modal("sin1"));
    REQUIRE(cat::u0_amplitudes("sin3").size() == 3);
    CHECK(cat::u0_amplitudes("sin3")[2] == 1.0);
    CHECK(cat::u0_amplitudes("sin1") == std::vector<double>{1.0});
    CHECK_FALSE(cat::u0_is_modal("parabola"));
    CHECK_THROWS_AS((void)cat::make_u0("blob", 0.0, 1.0),
                    std::invalid_argument);
}

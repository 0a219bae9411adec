#include "fracfp/catalog.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace fracfp::catalog {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void unknown(const std::string& slot, const std::string& id) {
    throw std::invalid_argument("catalog: unknown " + slot + " entry '" + id +
                                "'");
}

// xi(x) and d xi / dx for the normalized coordinate
struct Chart {
    double x_left;
    double inv_width;
    double xi(double x) const { return (x - x_left) * inv_width; }
};

Chart chart(double x_left, double x_right) {
    if (!(x_right > x_left))
        throw std::invalid_argument("catalog: domain must have x_left < x_right");
    return Chart{x_left, 1.0 / (x_right - x_left)};
}

bool parse_number(const std::string& id, double& out) {
    const char* begin = id.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0';
}

}  // namespace

const std::vector<Entry>& u0_entries() {
    static const std::vector<Entry> entries = {
        {"zero", "0"},
        {"sin1", "sin(pi xi)"},
        {"sin3", "sin(3 pi xi)"},
        {"parabola", "xi (1 - xi)"},
    };
    return entries;
}

const std::vector<Entry>& g_entries() {
    static const std::vector<Entry> entries = {
        {"zero", "0"},
        {"sin1", "sin(pi xi)"},
        {"tsin", "t sin(pi xi)"},
    };
    return entries;
}

const std::vector<Entry>& f_entries() {
    static const std::vector<Entry> entries = {
        {"zero", "0"},
        {"const1", "1"},
        {"half", "1/2"},
        {"xsin", "sin(pi xi)"},
    };
    return entries;
}

const std::vector<Entry>& kappa_entries() {
    static const std::vector<Entry> entries = {
        {"const1", "1"},
        {"const2", "2"},
        {"ramp", "1 + xi"},
    };
    return entries;
}

std::function<double(double)> make_u0(const std::string& id, double x_left,
                                      double x_right) {
    const Chart c = chart(x_left, x_right);
    if (id == "zero") return [](double) { return 0.0; };
    if (id == "sin1")
        return [c](double x) { return std::sin(kPi * c.xi(x)); };
    if (id == "sin3")
        return [c](double x) { return std::sin(3.0 * kPi * c.xi(x)); };
    if (id == "parabola")
        return [c](double x) {
            const double xi = c.xi(x);
            return xi * (1.0 - xi);
        };
    unknown("u0", id);
}

std::function<double(double)> make_u0_deriv(const std::string& id,
                                            double x_left, double x_right) {
    const Chart c = chart(x_left, x_right);
    if (id == "zero") return [](double) { return 0.0; };
    if (id == "sin1")
        return [c](double x) {
            return kPi * c.inv_width * std::cos(kPi * c.xi(x));
        };
    if (id == "sin3")
        return [c](double x) {
            return 3.0 * kPi * c.inv_width * std::cos(3.0 * kPi * c.xi(x));
        };
    if (id == "parabola")
        return [c](double x) { return c.inv_width * (1.0 - 2.0 * c.xi(x)); };
    unknown("u0", id);
}

std::function<double(double, double)> make_g(const std::string& id,
                                             double x_left, double x_right) {
    const Chart c = chart(x_left, x_right);
    if (id == "zero") return [](double, double) { return 0.0; };
    if (id == "sin1")
        return [c](double x, double) { return std::sin(kPi * c.xi(x)); };
    if (id == "tsin")
        return [c](double x, double t) { return t * std::sin(kPi * c.xi(x)); };
    unknown("g", id);
}

std::function<double(double, double)> make_f(const std::string& id,
                                             double x_left, double x_right) {
    const Chart c = chart(x_left, x_right);
    if (id == "zero") return [](double, double) { return 0.0; };
    if (id == "const1") return [](double, double) { return 1.0; };
    if (id == "half") return [](double, double) { return 0.5; };
    if (id == "xsin")
        return [c](double x, double) { return std::sin(kPi * c.xi(x)); };
    unknown("F", id);
}

double f_bound(const std::string& id) {
    if (id == "zero") return 0.0;
    if (id == "const1") return 1.0;
    if (id == "half") return 0.5;
    if (id == "xsin") return 1.0;
    unknown("F", id);
}

std::function<double(double)> make_kappa(const std::string& id, double x_left,
                                         double x_right) {
    double value = 0.0;
    if (parse_number(id, value)) {
        if (!(value > 0.0))
            throw std::invalid_argument(
                "catalog: numeric kappa must be positive");
        return [value](double) { return value; };
    }
    const Chart c = chart(x_left, x_right);
    if (id == "const1") return [](double) { return 1.0; };
    if (id == "const2") return [](double) { return 2.0; };
    if (id == "ramp") return [c](double x) { return 1.0 + c.xi(x); };
    unknown("kappa", id);
}

double kappa_min(const std::string& id) {
    double value = 0.0;
    if (parse_number(id, value)) {
        if (!(value > 0.0))
            throw std::invalid_argument(
                "catalog: numeric kappa must be positive");
        return value;
    }
    if (id == "const1") return 1.0;
    if (id == "const2") return 2.0;
    if (id == "ramp") return 1.0;
    unknown("kappa", id);
}

bool kappa_is_constant(const std::string& id) {
    double value = 0.0;
    if (parse_number(id, value)) return true;
    return id == "const1" || id == "const2";
}

double kappa_constant(const std::string& id) {
    double value = 0.0;
    if (parse_number(id, value)) return value;
    if (id == "const1") return 1.0;
    if (id == "const2") return 2.0;
    throw std::invalid_argument("catalog: kappa entry '" + id +
                                "' is not constant");
}

bool u0_is_modal(const std::string& id) {
    return id == "zero" || id == "sin1" || id == "sin3";
}

std::vector<double> u0_amplitudes(const std::string& id) {
    if (id == "zero") return {};
    if (id == "sin1") return {1.0};
    if (id == "sin3") return {0.0, 0.0, 1.0};
    throw std::invalid_argument("catalog: u0 entry '" + id +
                                "' is not an eigenmode mix");
}

}  // namespace fracfp::catalog

#pragma once

#include <functional>
#include <string>
#include <vector>

// Fixed catalog of coefficient expressions selectable from experiment
// configs. Spatial profiles are written in the normalized coordinate
// xi = (x - x_left) / (x_right - x_left), so every entry is well defined on
// any domain; on (0, 1) the identifiers read literally (sin1 = sin(pi x)).
namespace fracfp::catalog {

struct Entry {
    std::string id;
    std::string description;
};

// one listing per slot, in stable order
const std::vector<Entry>& u0_entries();
const std::vector<Entry>& g_entries();
const std::vector<Entry>& f_entries();
const std::vector<Entry>& kappa_entries();

// Factories; unknown identifiers throw std::invalid_argument naming the slot.
std::function<double(double)> make_u0(const std::string& id, double x_left,
                                      double x_right);
std::function<double(double)> make_u0_deriv(const std::string& id,
                                            double x_left, double x_right);
std::function<double(double, double)> make_g(const std::string& id,
                                             double x_left, double x_right);
std::function<double(double, double)> make_f(const std::string& id,
                                             double x_left, double x_right);
double f_bound(const std::string& id);

// kappa accepts a catalog identifier or a positive numeric literal
std::function<double(double)> make_kappa(const std::string& id, double x_left,
                                         double x_right);
double kappa_min(const std::string& id);

// constant-diffusivity value when the entry is spatially constant; used by
// the separated-modes reference, which requires constant kappa
bool kappa_is_constant(const std::string& id);
double kappa_constant(const std::string& id);

// amplitude vector when the initial profile is a pure eigenmode mix
bool u0_is_modal(const std::string& id);
std::vector<double> u0_amplitudes(const std::string& id);

}  // namespace fracfp::catalog

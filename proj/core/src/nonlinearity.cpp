#include <cmath>
#include <random>
#include <stdexcept>

#include "wavelab/iteration.hpp"

namespace wavelab {

Nonlinearity Nonlinearity::absolute(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("Nonlinearity: p must be > 1");
  return {NonlinearityKind::absolute, p, 1.0, p};
}

Nonlinearity Nonlinearity::signed_power(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("Nonlinearity: p must be > 1");
  return {NonlinearityKind::signed_power, p, 1.0, p};
}

Nonlinearity Nonlinearity::zero(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("Nonlinearity: p must be > 1");
  return {NonlinearityKind::zero, p, 0.0, 0.0};
}

double Nonlinearity::operator()(double u) const {
  switch (kind) {
    case NonlinearityKind::absolute: return std::pow(std::abs(u), p);
    case NonlinearityKind::signed_power: return std::copysign(std::pow(std::abs(u), p), u);
    case NonlinearityKind::zero: return 0.0;
  }
  return 0.0;
}

double Nonlinearity::derivative(double u) const {
  switch (kind) {
    case NonlinearityKind::absolute: return p * std::copysign(std::pow(std::abs(u), p - 1.0), u);
    case NonlinearityKind::signed_power: return p * std::pow(std::abs(u), p - 1.0);
    case NonlinearityKind::zero: return 0.0;
  }
  return 0.0;
}

std::size_t Nonlinearity::bound_violations(std::size_t samples, std::uint64_t seed, double range) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-range, range);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double u = ud(rng);
    const double a = std::abs(u);
    const double slack = 1.0 + 1e-12;
    if (std::abs((*this)(u)) > slack * c0 * std::pow(a, p)) ++bad;
    else if (std::abs(derivative(u)) > slack * c1 * std::pow(a, p - 1.0)) ++bad;
  }
  return bad;
}

std::string to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::absolute: return "absolute";
    case NonlinearityKind::signed_power: return "signed";
    case NonlinearityKind::zero: return "zero";
  }
  return "unknown";
}

NonlinearityKind nonlinearity_kind_from_string(const std::string& s) {
  if (s == "absolute") return NonlinearityKind::absolute;
  if (s == "signed") return NonlinearityKind::signed_power;
  if (s == "zero") return NonlinearityKind::zero;
  throw std::invalid_argument("unknown nonlinearity kind: " + s);
}

}  // namespace wavelab

// polynomial.hpp — dense univariate polynomials over the exact rational scalar

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rashba/rational.hpp"

namespace rashba {

// Coefficients stored lowest power first; the zero polynomial has one
// coefficient. Trailing zero coefficients are stripped on construction.
class Polynomial {
public:
    Polynomial() : coeffs_{Rational(0)} {}
    explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(Rational(0));
        strip();
    }
    static Polynomial constant(const Rational& c) { return Polynomial({c}); }
    // c * z^k
    static Polynomial monomial(const Rational& c, std::size_t k) {
        std::vector<Rational> v(k + 1, Rational(0));
        v[k] = c;
        return Polynomial(std::move(v));
    }

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    std::size_t degree() const { return coeffs_.size() - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0; }
    Rational coeff(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : Rational(0);
    }
    Rational leading() const { return coeffs_.back(); }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(std::move(out));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
        return Polynomial(std::move(out));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(out));
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& a) {
        std::vector<Rational> out = a.coeffs_;
        for (auto& c : out) c *= s;
        return Polynomial(std::move(out));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.coeffs_ == b.coeffs_;
    }

    Polynomial derivative() const {
        if (coeffs_.size() == 1) return Polynomial();
        std::vector<Rational> out(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = Rational(i) * coeffs_[i];
        return Polynomial(std::move(out));
    }
    // multiply by z^k
    Polynomial shift_up(std::size_t k = 1) const {
        if (is_zero()) return Polynomial();
        std::vector<Rational> out(coeffs_.size() + k, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i + k] = coeffs_[i];
        return Polynomial(std::move(out));
    }
    // divide by z, discarding the constant term (the caller inspects coeff(0)
    // first when the remainder matters)
    Polynomial shift_down() const {
        if (coeffs_.size() == 1) return Polynomial();
        return Polynomial(std::vector<Rational>(coeffs_.begin() + 1, coeffs_.end()));
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }
    std::complex<double> eval(std::complex<double> x) const {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + to_double(coeffs_[i]);
        return acc;
    }
    // sum_k |c_k| |x|^k, the natural magnitude scale for |eval(x)|
    double eval_scale(std::complex<double> x) const {
        const double ax = std::abs(x);
        double acc = 0.0, p = 1.0;
        for (const auto& c : coeffs_) {
            acc += std::abs(to_double(c)) * p;
            p *= ax;
        }
        return acc;
    }

private:
    void strip() {
        while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rational> coeffs_;
};

}  // namespace rashba

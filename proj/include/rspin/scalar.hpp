#pragma once

// The coefficient ring Q[i, s] / (i^2 + 1, s^2 - r).
//
// An element is stored as q0 + q1*i + q2*s + q3*i*s with the relations applied
// eagerly, so the four-component form is canonical and equality is structural.

#include "rspin/rational.hpp"

#include <array>
#include <ostream>
#include <string>

namespace rspin {

class Scalar {
public:
    enum Component { Real = 0, I = 1, S = 2, IS = 3 };

    Scalar() = default;

    explicit Scalar(int r, Rational q0 = 0, Rational q1 = 0, Rational q2 = 0, Rational q3 = 0)
        : r_(r), q_{std::move(q0), std::move(q1), std::move(q2), std::move(q3)}
    {
        if (r < 2)
            throw Error("scalar ring needs r >= 2, got " + std::to_string(r));
        for (auto& c : q_)
            c.canonicalize();
    }

    static Scalar rational(int r, Rational q) { return Scalar(r, std::move(q)); }
    static Scalar i(int r) { return Scalar(r, 0, 1); }
    static Scalar sqrt_r(int r) { return Scalar(r, 0, 0, 1); }
    /// The constant kappa = i*s/r appearing in D = kappa * d/dx.
    static Scalar kappa(int r) { return Scalar(r, 0, 0, 0, Rational(1, r)); }

    int r() const { return r_; }
    const Rational& operator[](Component c) const { return q_[c]; }

    bool is_zero() const { return q_[0] == 0 && q_[1] == 0 && q_[2] == 0 && q_[3] == 0; }
    bool is_rational() const { return q_[1] == 0 && q_[2] == 0 && q_[3] == 0; }
    bool is_one() const { return is_rational() && q_[0] == 1; }

    const Rational& rational_part() const { return q_[0]; }

    friend bool operator==(const Scalar& x, const Scalar& y)
    {
        return x.r_ == y.r_ && x.q_ == y.q_;
    }

    Scalar operator-() const
    {
        Scalar out = *this;
        for (auto& c : out.q_)
            c = -c;
        return out;
    }

    Scalar& operator+=(const Scalar& y)
    {
        check_same_ring(y);
        for (int k = 0; k < 4; ++k)
            q_[k] += y.q_[k];
        return *this;
    }

    Scalar& operator-=(const Scalar& y)
    {
        check_same_ring(y);
        for (int k = 0; k < 4; ++k)
            q_[k] -= y.q_[k];
        return *this;
    }

    Scalar& operator*=(const Scalar& y)
    {
        *this = *this * y;
        return *this;
    }

    Scalar& operator*=(const Rational& y)
    {
        for (auto& c : q_)
            c *= y;
        return *this;
    }

    friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
    friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
    friend Scalar operator*(Scalar x, const Rational& y) { return x *= y; }
    friend Scalar operator*(const Rational& y, Scalar x) { return x *= y; }

    friend Scalar operator*(const Scalar& x, const Scalar& y)
    {
        x.check_same_ring(y);
        const Rational r(x.r_);
        const auto& a = x.q_;
        const auto& b = y.q_;
        // basis {1, i, s, is}: i*i = -1, s*s = r, (is)*(is) = -r.
        Rational c0 = a[0] * b[0] - a[1] * b[1] + r * a[2] * b[2] - r * a[3] * b[3];
        Rational c1 = a[0] * b[1] + a[1] * b[0] + r * a[2] * b[3] + r * a[3] * b[2];
        Rational c2 = a[0] * b[2] + a[2] * b[0] - a[1] * b[3] - a[3] * b[1];
        Rational c3 = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1];
        return Scalar(x.r_, std::move(c0), std::move(c1), std::move(c2), std::move(c3));
    }

    /// Ring norm N(x) = x * conj_i(x) * conj_s(x) * conj_is(x); x is a unit iff N(x) != 0.
    Rational norm() const
    {
        const Rational r(r_);
        // x * conj_i(x) = A + B*s
        Rational A = q_[0] * q_[0] + q_[1] * q_[1] + r * (q_[2] * q_[2] + q_[3] * q_[3]);
        Rational B = 2 * (q_[0] * q_[2] + q_[1] * q_[3]);
        return A * A - r * B * B;
    }

    Scalar inverse() const
    {
        if (is_zero())
            throw Error("division by zero scalar");
        const Rational N = norm();
        if (N == 0)
            throw Error("scalar " + str() + " is a zero divisor for r=" + std::to_string(r_) +
                        " and has no inverse");
        const Rational r(r_);
        Scalar conj_i(r_, q_[0], -q_[1], q_[2], -q_[3]);
        Rational A = q_[0] * q_[0] + q_[1] * q_[1] + r * (q_[2] * q_[2] + q_[3] * q_[3]);
        Rational B = 2 * (q_[0] * q_[2] + q_[1] * q_[3]);
        Scalar conj_s(r_, A / N, 0, -B / N);
        return conj_i * conj_s;
    }

    friend Scalar operator/(const Scalar& x, const Scalar& y)
    {
        x.check_same_ring(y);
        return x * y.inverse();
    }

    /// Canonical text form: a bare rational when i and s are absent, otherwise
    /// "(q0 + q1*I + q2*S + q3*I*S)" with zero components omitted.
    std::string str() const
    {
        if (is_rational())
            return to_string(q_[0]);
        static constexpr const char* names[4] = {"", "I", "S", "I*S"};
        std::string out = "(";
        bool first = true;
        for (int k = 0; k < 4; ++k) {
            if (q_[k] == 0)
                continue;
            Rational mag = abs(q_[k]);
            if (first)
                out += q_[k] < 0 ? "-" : "";
            else
                out += q_[k] < 0 ? " - " : " + ";
            if (k == 0)
                out += to_string(mag);
            else if (mag == 1)
                out += names[k];
            else
                out += to_string(mag) + "*" + names[k];
            first = false;
        }
        return out + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << x.str(); }

private:
    void check_same_ring(const Scalar& y) const
    {
        if (r_ != y.r_)
            throw Error("scalar arithmetic across rings r=" + std::to_string(r_) + " and r=" +
                        std::to_string(y.r_));
    }

    int r_ = 2;
    std::array<Rational, 4> q_{};
};

inline Scalar pow(const Scalar& x, unsigned n)
{
    Scalar out = Scalar::rational(x.r(), 1);
    for (unsigned k = 0; k < n; ++k)
        out *= x;
    return out;
}

} // namespace rspin

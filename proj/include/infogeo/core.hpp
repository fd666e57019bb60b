#pragma once

#include "infogeo/errors.hpp"
#include "infogeo/numerics.hpp"

#include <string>

namespace infogeo {

// Any weight at or below this floor is treated as outside the open simplex.
// Generators such as u ln u and u^{1-q} have singular derivatives at 0, so
// the whole library works strictly in the interior.
inline constexpr double kInteriorFloor = 1e-12;

// Tolerance on |sum of weights - 1|.
inline constexpr double kSumTol = 1e-12;

// Default seed for every randomized routine, so published runs reproduce.
inline constexpr std::uint64_t kDefaultSeed = 0x1F05E;

// Finite set of outcomes, identified only by its size.
class Alphabet {
public:
    explicit Alphabet(int size);
    int size() const { return size_; }
    friend bool operator==(Alphabet a, Alphabet b) { return a.size_ == b.size_; }

private:
    int size_;
};

// Strictly positive, normalized weight vector over an alphabet.
class Distribution {
public:
    explicit Distribution(Vec weights);
    const Vec& weights() const { return weights_; }
    double operator()(int a) const { return weights_(a); }
    int size() const { return static_cast<int>(weights_.size()); }
    Alphabet alphabet() const { return Alphabet(size()); }

private:
    Vec weights_;
};

// Real-valued function on the alphabet, evaluated against a distribution
// as the expectation <x|q>.
class Question {
public:
    explicit Question(Vec values);
    const Vec& values() const { return values_; }
    double operator()(int a) const { return values_(a); }
    int size() const { return static_cast<int>(values_.size()); }
    Alphabet alphabet() const { return Alphabet(size()); }

    static Question constant_one(Alphabet a);

private:
    Vec values_;
};

// <x|q> = sum_a x(a) q(a)
double evaluate(const Distribution& x, const Question& q);

} // namespace infogeo

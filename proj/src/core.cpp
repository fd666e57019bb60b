#include "infogeo/core.hpp"

#include "infogeo/errors.hpp"

#include <cmath>
#include <sstream>

namespace infogeo {

Alphabet::Alphabet(int size) : size_(size) {
    if (size < 2) {
        throw ContractViolation("Alphabet: need at least two symbols");
    }
}

Distribution::Distribution(Vec weights) : weights_(std::move(weights)) {
    if (weights_.size() < 2) {
        throw ContractViolation("Distribution: need at least two symbols");
    }
    double sum = 0.0;
    for (int a = 0; a < weights_.size(); ++a) {
        const double w = weights_(a);
        if (!std::isfinite(w)) {
            throw DomainError("Distribution: non-finite weight");
        }
        if (w < kInteriorFloor) {
            std::ostringstream msg;
            msg << "Distribution: weight " << w << " at symbol " << a
                << " is below the interior floor " << kInteriorFloor;
            throw DomainError(msg.str());
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTol) {
        std::ostringstream msg;
        msg << "Distribution: weights sum to " << sum << ", expected 1 within " << kSumTol;
        throw DomainError(msg.str());
    }
}

Question::Question(Vec values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw ContractViolation("Question: need at least two symbols");
    }
    for (int a = 0; a < values_.size(); ++a) {
        if (!std::isfinite(values_(a))) {
            throw DomainError("Question: non-finite value");
        }
    }
}

Question Question::constant_one(Alphabet alphabet) {
    return Question(Vec::Ones(alphabet.size()));
}

double evaluate(const Distribution& x, const Question& q) {
    if (x.size() != q.size()) {
        throw ContractViolation("evaluate: distribution and question live on different alphabets");
    }
    return x.weights().dot(q.values());
}

} // namespace infogeo

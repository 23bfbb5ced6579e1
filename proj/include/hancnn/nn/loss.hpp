#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace hancnn::nn {

struct SoftmaxXentResult {
    double loss;
    std::vector<double> probs;
    std::vector<double> grad_logits;   // probs - onehot(target)
};

// Softmax (max-subtracted for stability) with categorical cross-entropy.
inline SoftmaxXentResult softmax_xent(std::span<const double> logits, std::size_t target) {
    if (logits.size() < 2)
        throw std::invalid_argument("softmax_xent: need at least 2 classes");
    if (target >= logits.size())
        throw std::invalid_argument("softmax_xent: target class out of range");
    SoftmaxXentResult r;
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    r.probs.resize(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        r.probs[i] = std::exp(logits[i] - max_logit);
        sum += r.probs[i];
    }
    for (double& p : r.probs) p /= sum;
    r.loss = -std::log(r.probs[target]);
    r.grad_logits = r.probs;
    r.grad_logits[target] -= 1.0;
    return r;
}

}  // namespace hancnn::nn

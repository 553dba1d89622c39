#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "molembed/nn/tape.hpp"

namespace molembed::nn {

struct GradCheckEntry {
    std::string param;
    double max_rel_err = 0.0;
    size_t worst_index = 0;
    double tape_grad = 0.0;
    double fd_grad = 0.0;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double worst = 0.0;

    bool pass(double tol) const { return worst < tol; }
};

// Compares tape gradients against central finite differences at 64-bit.
// `build_loss` must construct the scalar loss on a fresh tape from the
// current parameter values each time it is called (params enter the graph
// via tape.parameter). Relative error uses a unit denominator floor so that
// near-zero gradients are compared absolutely:
//   rel = |a − b| / max(|a|, |b|, floor)
inline GradCheckReport grad_check(const std::function<int(Tape64&)>& build_loss,
                                  const std::vector<Param64*>& params, double h = 1e-5,
                                  double denom_floor = 1e-2) {
    const auto eval = [&]() -> double {
        Tape64 tape;
        const int loss = build_loss(tape);
        const double v = tape.value(loss)(0, 0);
        if (!std::isfinite(v)) throw NumericError("grad_check: non-finite loss value");
        return v;
    };

    for (Param64* p : params) p->zero_grad();
    {
        Tape64 tape;
        const int loss = build_loss(tape);
        if (!std::isfinite(tape.value(loss)(0, 0))) {
            throw NumericError("grad_check: non-finite loss value");
        }
        tape.backward(loss);
    }

    GradCheckReport report;
    for (Param64* p : params) {
        GradCheckEntry entry;
        entry.param = p->name;
        for (size_t i = 0; i < p->value.size(); ++i) {
            const double orig = p->value[i];
            p->value[i] = orig + h;
            const double up = eval();
            p->value[i] = orig - h;
            const double down = eval();
            p->value[i] = orig;
            const double fd = (up - down) / (2.0 * h);
            const double an = p->grad[i];
            if (!std::isfinite(fd) || !std::isfinite(an)) {
                throw NumericError("grad_check: non-finite gradient for " + p->name +
                                   " element " + std::to_string(i));
            }
            const double denom = std::max({std::fabs(an), std::fabs(fd), denom_floor});
            const double rel = std::fabs(an - fd) / denom;
            if (rel > entry.max_rel_err) {
                entry.max_rel_err = rel;
                entry.worst_index = i;
                entry.tape_grad = an;
                entry.fd_grad = fd;
            }
        }
        report.worst = std::max(report.worst, entry.max_rel_err);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

} // namespace molembed::nn

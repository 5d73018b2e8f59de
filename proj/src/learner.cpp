#include "satrack/learner.hpp"

#include <stdexcept>

namespace satrack {

QFunction::QFunction(std::uint32_t table_size, int num_actions)
    : table_(table_size), actions_(num_actions),
      w_(static_cast<std::size_t>(table_size) * num_actions, 0.0) {
    if (num_actions < 1) throw std::invalid_argument("num_actions must be >= 1");
}

double QFunction::value(std::span<const std::uint32_t> tiles, int action) const {
    if (action < 0 || action >= actions_) throw std::logic_error("unknown action index");
    double q = 0.0;
    for (std::uint32_t t : tiles) q += w_[static_cast<std::size_t>(t) * actions_ + action];
    return q;
}

void QFunction::values(std::span<const std::uint32_t> tiles, double* out) const {
    for (int a = 0; a < actions_; ++a) out[a] = 0.0;
    for (std::uint32_t t : tiles) {
        const double* row = &w_[static_cast<std::size_t>(t) * actions_];
        for (int a = 0; a < actions_; ++a) out[a] += row[a];
    }
}

double QFunction::max_value(std::span<const std::uint32_t> tiles,
                            std::span<const int> admissible) const {
    if (admissible.empty()) throw std::logic_error("admissible set must be non-empty");
    double vals[64];
    if (actions_ <= 64) {
        values(tiles, vals);
        double best = vals[admissible[0]];
        for (int a : admissible)
            if (vals[a] > best) best = vals[a];
        return best;
    }
    double best = value(tiles, admissible[0]);
    for (int a : admissible) {
        const double v = value(tiles, a);
        if (v > best) best = v;
    }
    return best;
}

void QFunction::td_update(std::span<const std::uint32_t> tiles_s, int action, double reward,
                          std::span<const std::uint32_t> tiles_next,
                          std::span<const int> admissible_next, double alpha, double gamma) {
    const double q_sa = value(tiles_s, action);
    const double bootstrap = max_value(tiles_next, admissible_next);
    const double delta = reward + gamma * bootstrap - q_sa;
    const double inc = alpha / static_cast<double>(tiles_s.size()) * delta;
    for (std::uint32_t t : tiles_s) w_[static_cast<std::size_t>(t) * actions_ + action] += inc;
}

int select_action(const QFunction& qf, std::span<const std::uint32_t> tiles,
                  std::span<const int> admissible, double epsilon, Rng& rng) {
    if (admissible.empty()) throw std::logic_error("admissible set must be non-empty");
    if (epsilon > 0.0 && rng.uniform() < epsilon)
        return admissible[rng.uniform_int(static_cast<int>(admissible.size()))];

    double vals[64];
    std::vector<double> heap_vals;
    const double* v = vals;
    if (qf.num_actions() > 64) {
        heap_vals.resize(qf.num_actions());
        for (int a : admissible) heap_vals[a] = qf.value(tiles, a);
        v = heap_vals.data();
    } else {
        qf.values(tiles, vals);
    }

    double best = v[admissible[0]];
    for (int a : admissible)
        if (v[a] > best) best = v[a];

    int ties[64];
    std::vector<int> heap_ties;
    int num_ties = 0;
    if (admissible.size() <= 64) {
        for (int a : admissible)
            if (v[a] == best) ties[num_ties++] = a;
        return num_ties == 1 ? ties[0] : ties[rng.uniform_int(num_ties)];
    }
    for (int a : admissible)
        if (v[a] == best) heap_ties.push_back(a);
    return heap_ties.size() == 1 ? heap_ties[0]
                                 : heap_ties[rng.uniform_int(static_cast<int>(heap_ties.size()))];
}

}  // namespace satrack

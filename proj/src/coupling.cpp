#include "hcu/coupling.hpp"

#include <algorithm>
#include <cmath>

namespace hcu {

void CouplingMatrix::add(int k, int l, double weight) {
    if (finalized_) throw ConfigError("CouplingMatrix: add after finalize");
    if (k < 0 || k >= units_ || l < 0 || l >= units_)
        throw ConfigError("CouplingMatrix: index out of range");
    if (k == l) throw ConfigError("CouplingMatrix: diagonal entries are not allowed");
    if (!std::isfinite(weight) || weight < 0.0)
        throw ConfigError("CouplingMatrix: weight must be finite and >= 0");
    if (weight == 0.0) return;
    pending_.push_back({static_cast<std::int32_t>(k), static_cast<std::int32_t>(l), weight});
}

void CouplingMatrix::finalize() {
    if (finalized_) return;
    std::sort(pending_.begin(), pending_.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    // merge duplicate (k,l) pairs by summing
    std::vector<Entry> merged;
    merged.reserve(pending_.size());
    for (const Entry& e : pending_) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
            merged.back().w += e.w;
        else
            merged.push_back(e);
    }
    row_ptr_.assign(static_cast<std::size_t>(units_) + 1, 0);
    col_.resize(merged.size());
    weight_.resize(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        col_[i] = merged[i].col;
        weight_[i] = merged[i].w;
        ++row_ptr_[static_cast<std::size_t>(merged[i].row) + 1];
    }
    for (std::size_t r = 1; r < row_ptr_.size(); ++r) row_ptr_[r] += row_ptr_[r - 1];
    pending_.clear();
    pending_.shrink_to_fit();
    finalized_ = true;
}

double CouplingMatrix::at(int k, int l) const {
    for (std::size_t idx = row_ptr_[k]; idx < row_ptr_[static_cast<std::size_t>(k) + 1]; ++idx)
        if (col_[idx] == l) return weight_[idx];
    return 0.0;
}

void ParameterField::validate() const {
    if (gamma.size() != sigma.size())
        throw ConfigError("ParameterField: gamma and sigma lengths differ");
    for (double g : gamma)
        if (!std::isfinite(g) || g <= 0.0)
            throw ConfigError("ParameterField: gamma values must be > 0");
    for (double s : sigma)
        if (!std::isfinite(s) || s < 0.0)
            throw ConfigError("ParameterField: sigma values must be >= 0");
    for (int p : pacemakers)
        if (p < 0 || p >= units())
            throw ConfigError("ParameterField: pacemaker index out of range");
}

} // namespace hcu

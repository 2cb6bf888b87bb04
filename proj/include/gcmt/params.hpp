#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gcmt/errors.hpp"
#include "gcmt/tensor.hpp"

namespace gcmt {

/// Ordered map from unique parameter name to Tensor. Iteration follows
/// insertion order, which makes optimizer sweeps and serialization
/// deterministic. Gradient sets are built with zeros_like() so key sets and
/// shapes always mirror the model parameters.
class ParamSet {
public:
    void add(const std::string& name, Tensor t) {
        if (index_.count(name)) throw ValidationError("ParamSet: duplicate parameter '" + name + "'");
        index_[name] = entries_.size();
        entries_.emplace_back(name, std::move(t));
    }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    Tensor& operator[](const std::string& name) {
        auto it = index_.find(name);
        if (it == index_.end()) throw ValidationError("ParamSet: unknown parameter '" + name + "'");
        return entries_[it->second].second;
    }

    const Tensor& operator[](const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw ValidationError("ParamSet: unknown parameter '" + name + "'");
        return entries_[it->second].second;
    }

    std::size_t size() const { return entries_.size(); }

    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    const std::pair<std::string, Tensor>& entry(std::size_t i) const { return entries_[i]; }
    std::pair<std::string, Tensor>& entry(std::size_t i) { return entries_[i]; }

    /// Same keys and shapes, all values zero.
    ParamSet zeros_like() const {
        ParamSet out;
        for (const auto& [name, t] : entries_) out.add(name, Tensor(t.shape()));
        return out;
    }

    /// Total scalar count across all tensors.
    std::size_t total_scalars() const {
        std::size_t n = 0;
        for (const auto& [name, t] : entries_) n += t.numel();
        return n;
    }

    bool same_layout(const ParamSet& other) const {
        if (entries_.size() != other.entries_.size()) return false;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].first != other.entries_[i].first) return false;
            if (entries_[i].second.shape() != other.entries_[i].second.shape()) return false;
        }
        return true;
    }

    void require_same_layout(const ParamSet& other, const std::string& what) const {
        if (!same_layout(other)) throw ValidationError(what + ": parameter sets have mismatched keys or shapes");
    }

private:
    std::vector<std::pair<std::string, Tensor>> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace gcmt

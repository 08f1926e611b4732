#pragma once

#include <stdexcept>
#include <string>

namespace bandcoh {

// Base error carrying a stable machine-readable code next to the human message.
// The CLI maps codes to exit status: budget_exceeded -> 2, everything else -> 1.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct not_associative : error {
    explicit not_associative(const std::string& w) : error("NotAssociative", w) {}
};
struct no_identity : error {
    explicit no_identity(const std::string& w) : error("NoIdentity", w) {}
};
struct no_inverse : error {
    explicit no_inverse(const std::string& w) : error("NoInverse", w) {}
};
struct budget_exceeded : error {
    explicit budget_exceeded(const std::string& w) : error("BudgetExceeded", w) {}
};
struct not_normal : error {
    explicit not_normal(const std::string& w) : error("NotNormal", w) {}
};
struct not_homomorphism : error {
    explicit not_homomorphism(const std::string& w) : error("NotHomomorphism", w) {}
};
struct not_outer_homomorphism : error {
    explicit not_outer_homomorphism(const std::string& w) : error("NotOuterHomomorphism", w) {}
};
struct not_cocycle : error {
    explicit not_cocycle(const std::string& w) : error("NotCocycle", w) {}
};
struct not_section : error {
    explicit not_section(const std::string& w) : error("NotSection", w) {}
};
struct hypothesis_violated : error {
    explicit hypothesis_violated(const std::string& w) : error("HypothesisViolated", w) {}
};
struct parse_error : error {
    explicit parse_error(const std::string& w) : error("ParseError", w) {}
};

// Lift precondition failures, numbered 1..5 in the order the conditions are checked.
struct condition_failed : error {
    condition_failed(int which, const std::string& w)
        : error("ConditionFailed(" + std::to_string(which) + ")", w), index(which) {}
    int index;
};

// Enumeration caps. Every search loop that can blow up checks against one of
// these and throws budget_exceeded instead of silently truncating.
struct Budget {
    // partial maps tried during automorphism/isomorphism backtracking
    long long max_aut_candidates = 1'000'000;
    // size of any explicitly enumerated cochain/section/witness space
    long long max_enumeration = 100'000'000;
    // size of any explicitly materialized element set (subgroups, cocycle sets)
    long long max_materialized = 2'000'000;
};

inline const Budget& default_budget() {
    static const Budget b{};
    return b;
}

} // namespace bandcoh

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redop/verify.hpp"

namespace redop {

struct SelftestOptions {
    std::uint64_t seed = 20240917;
};

/// Fixture suite behind `redop selftest` and the acceptance binary. Check
/// names start with "C<k>/" for the criterion they belong to (k = 1..8).
VerificationReport run_selftest(const SelftestOptions& opt = {});

struct CriterionResult {
    int id = 0;
    std::string title;
    int checks = 0;
    int failed = 0;
    bool pass() const { return checks > 0 && failed == 0; }
};

std::string criterion_title(int id);

/// Groups the checks of a selftest report by criterion.
std::vector<CriterionResult> summarize_criteria(const VerificationReport& rep);

}  // namespace redop

// Acceptance runner: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "redop/detsys.hpp"
#include "redop/selftest.hpp"

using namespace redop;

namespace {

// Number of distinct "C<k>/<group>" prefixes among the checks of criterion k.
int groups(const VerificationReport& rep, int id) {
    std::set<std::string> g;
    const std::string prefix = "C" + std::to_string(id) + "/";
    for (const auto& c : rep.checks) {
        if (c.name.rfind(prefix, 0) != 0) continue;
        auto rest = c.name.substr(prefix.size());
        g.insert(rest.substr(0, rest.find('/')));
    }
    return static_cast<int>(g.size());
}

void line(bool pass, int id, const std::string& detail) {
    std::printf("%s criterion-%d: %s (%s)\n", pass ? "PASS" : "FAIL", id, criterion_title(id).c_str(), detail.c_str());
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;

    // criterion 1 carries a runtime bound on the derivation itself
    auto t0 = Clock::now();
    ReducedEquation red{fn(make_function("V", {"t", "x"}))};
    derive_DE1(red.as_parabolic());
    derive_DE0(red.as_parabolic());
    double derive_s = std::chrono::duration<double>(Clock::now() - t0).count();

    auto first = run_selftest();
    auto second = run_selftest();

    // minimum fixture counts per criterion, beyond "every check passes"
    const std::map<int, int> min_groups{{2, 6}, {6, 4}, {7, 4}};

    bool all = true;
    auto summary = summarize_criteria(first);
    std::map<int, CriterionResult> by_id;
    for (const auto& c : summary) by_id[c.id] = c;
    for (int id = 1; id <= 8; ++id) {
        auto it = by_id.find(id);
        bool pass = it != by_id.end() && it->second.pass();
        std::string detail = it == by_id.end()
                                 ? "no checks"
                                 : std::to_string(it->second.checks - it->second.failed) + "/" +
                                       std::to_string(it->second.checks) + " checks";
        if (auto m = min_groups.find(id); m != min_groups.end()) {
            int n = groups(first, id);
            pass = pass && n >= m->second;
            detail += ", " + std::to_string(n) + " fixtures (need " + std::to_string(m->second) + ")";
        }
        if (id == 1) {
            pass = pass && derive_s < 1.0;
            char buf[64];
            std::snprintf(buf, sizeof buf, ", derivation %.3f s", derive_s);
            detail += buf;
        }
        all = all && pass;
        line(pass, id, detail);
    }

    std::string a = first.machine(), b = second.machine();
    bool same = a == b;
    all = all && same;
    line(same, 9, std::to_string(a.size()) + " bytes, " + (same ? "identical" : "different"));

    if (!all) {
        for (const auto& c : first.checks)
            if (!c.pass) std::printf("  failed: %s\n", c.name.c_str());
    }
    return all ? 0 : 1;
}

#pragma once

#include "vdm/coeffs.hpp"

#include <map>
#include <optional>
#include <string>

namespace vdm {

// Persistent coefficient table. Text lines
//   <partition>;<kind>;<num>/<den>|<float>;<stderr>;<samples>
// keyed by the canonical partition text, one kind per partition (an exact
// entry supersedes any MC entry). Higher moments reuse thousands of
// coefficients, so CLI runs share one of these via VANDERMOMENT_CACHE.
class CoefficientCache {
public:
    CoefficientCache() = default;

    void put(const SetPartition& p, const ExpansionCoefficient& c);
    std::optional<ExpansionCoefficient> get(const SetPartition& p) const;

    std::size_t size() const { return entries_.size(); }

    void load(const std::string& path);        // missing file is fine (empty cache)
    void save(const std::string& path) const;  // versioned header line

private:
    std::map<std::string, ExpansionCoefficient> entries_;
};

} // namespace vdm

#include "vdm/coeff_cache.hpp"

#include "vdm/errors.hpp"

#include <fstream>
#include <sstream>

namespace vdm {

namespace {
constexpr const char* kHeader = "#vandermoment-coeff-cache v1";
}

void CoefficientCache::put(const SetPartition& p, const ExpansionCoefficient& c) {
    std::string key = p.to_text();
    auto it = entries_.find(key);
    if (it != entries_.end()) {
        const bool existing_exact = it->second.kind != ExpansionCoefficient::Kind::McEstimate;
        const bool incoming_exact = c.kind != ExpansionCoefficient::Kind::McEstimate;
        if (existing_exact && !incoming_exact) return;
        if (!incoming_exact && !existing_exact && c.samples <= it->second.samples) return;
    }
    entries_[key] = c;
}

std::optional<ExpansionCoefficient> CoefficientCache::get(const SetPartition& p) const {
    auto it = entries_.find(p.to_text());
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void CoefficientCache::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line != kHeader) throw domain_error("unrecognized coefficient cache version: " + line);
            continue;
        }
        std::istringstream ls(line);
        std::string part_text, kind_text, value_text, stderr_text, samples_text;
        if (!std::getline(ls, part_text, ';') || !std::getline(ls, kind_text, ';') ||
            !std::getline(ls, value_text, ';') || !std::getline(ls, stderr_text, ';') ||
            !std::getline(ls, samples_text, ';')) {
            throw domain_error("malformed coefficient cache line: " + line);
        }
        ExpansionCoefficient c;
        c.kind = ExpansionCoefficient::kind_from_name(kind_text);
        if (c.kind == ExpansionCoefficient::Kind::McEstimate) {
            c.value = std::stod(value_text);
        } else {
            c.exact = Rational::parse(value_text);
            c.value = c.exact->to_double();
        }
        c.stderr_value = std::stod(stderr_text);
        c.samples = std::stoll(samples_text);
        put(SetPartition::from_text(part_text), c);
    }
}

void CoefficientCache::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw domain_error("cannot write coefficient cache: " + path);
    out << kHeader << '\n';
    out.precision(17);
    for (const auto& [key, c] : entries_) {
        out << key << ';' << c.kind_name() << ';';
        if (c.exact) {
            out << c.exact->to_string();
        } else {
            out << c.value;
        }
        out << ';' << c.stderr_value << ';' << c.samples << '\n';
    }
}

} // namespace vdm

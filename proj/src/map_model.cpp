#include "lyatel/map_model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace lyatel {

MapSpec MapSpec::unicritical(int d, std::complex<double> c) {
    if (d < 2) throw DomainError("unicritical degree must be >= 2");
    MapSpec m;
    m.family = MapFamily::UnicriticalPoly;
    m.degree = d;
    m.c = c;
    return m;
}

MapSpec MapSpec::exponential(std::complex<double> a, std::complex<double> c) {
    if (std::abs(a) == 0.0) throw DomainError("exponential coefficient a must be nonzero");
    MapSpec m;
    m.family = MapFamily::Exponential;
    m.a = a;
    m.c = c;
    return m;
}

std::complex<double> eval(const MapSpec& map, std::complex<double> z) {
    return cx_to_std(map_eval_t<double>(map, cx_of(z), 53));
}

std::complex<double> deriv(const MapSpec& map, std::complex<double> z) {
    return cx_to_std(map_deriv_t<double>(map, cx_of(z), 53));
}

SingularSet singular_set(const MapSpec& map) {
    SingularSet s;
    s.points = {map.c};
    s.bounded = true;
    s.S_f = std::abs(map.c) + 1.0;
    return s;
}

InverseBranchState pull_back_step(const MapSpec& map, const InverseBranchState& branch,
                                  std::complex<double> target, const PullOptions& opt) {
    auto out = pull_back_toward<double>(map, cx_of(branch.current_point), cx_of(target), 53, opt);
    if (out.status == PullStatus::Singular)
        throw SingularHit("pullback target coincides with the singular value");
    if (out.status == PullStatus::Ambiguous)
        throw AmbiguousBranch("equidistant preimage candidates; refine the path step");
    return InverseBranchState{cx_to_std(out.value), branch.level + 1};
}

// --- grammar ----------------------------------------------------------------

namespace {

// <re>[(+|-)<im>i], exact on decimal literals via strtod.
std::complex<double> parse_complex_impl(const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    double re = std::strtod(s, &end);
    if (end == s) throw ParseError("bad complex literal: '" + text + "'");
    if (*end == '\0') return {re, 0.0};
    // imaginary part: remainder must be (+|-)<num>i or just 'i' forms
    const char* p = end;
    if (*p != '+' && *p != '-') throw ParseError("bad complex literal: '" + text + "'");
    char* end2 = nullptr;
    double im = std::strtod(p, &end2);
    if (end2 == p || *end2 != 'i' || *(end2 + 1) != '\0') {
        // allow "+i" / "-i"
        if ((p[1] == 'i') && p[2] == '\0') {
            im = (*p == '-') ? -1.0 : 1.0;
            return {re, im};
        }
        throw ParseError("bad complex literal: '" + text + "'");
    }
    return {re, im};
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

std::complex<double> parse_complex(const std::string& text) { return parse_complex_impl(trim(text)); }

std::string format_complex(std::complex<double> z) {
    char buf[80];
    if (z.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

MapSpec parse_map(const std::string& text) {
    std::string t = trim(text);
    size_t colon = t.find(':');
    if (colon == std::string::npos) throw ParseError("map spec needs 'family:'prefix: '" + text + "'");
    std::string family = t.substr(0, colon);
    std::string rest = t.substr(colon + 1);

    // split on commas into key=value pairs
    std::vector<std::pair<std::string, std::string>> kv;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value in map spec: '" + item + "'");
        kv.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }

    auto get = [&](const std::string& key) -> const std::string& {
        for (auto& [k, v] : kv)
            if (k == key) return v;
        throw ParseError("map spec missing key '" + key + "': '" + text + "'");
    };

    if (family == "poly") {
        if (kv.size() != 2) throw ParseError("poly spec takes exactly d and c: '" + text + "'");
        const std::string& ds = get("d");
        char* end = nullptr;
        long d = std::strtol(ds.c_str(), &end, 10);
        if (end == ds.c_str() || *end != '\0' || d < 2 || d > 64)
            throw ParseError("poly degree must be an integer in [2,64]: '" + ds + "'");
        return MapSpec::unicritical((int)d, parse_complex(get("c")));
    }
    if (family == "exp") {
        if (kv.size() != 2) throw ParseError("exp spec takes exactly a and c: '" + text + "'");
        std::complex<double> a = parse_complex(get("a"));
        if (std::abs(a) == 0.0) throw ParseError("exp coefficient a must be nonzero");
        return MapSpec::exponential(a, parse_complex(get("c")));
    }
    throw ParseError("unknown map family '" + family + "'");
}

std::string format_map(const MapSpec& map) {
    if (map.family == MapFamily::UnicriticalPoly)
        return "poly:d=" + std::to_string(map.degree) + ",c=" + format_complex(map.c);
    return "exp:a=" + format_complex(map.a) + ",c=" + format_complex(map.c);
}

} // namespace lyatel

#include "platelab/config.hpp"

#include <fstream>
#include <sstream>

#include "platelab/errors.hpp"
#include "platelab/geometry.hpp"

namespace platelab::config {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

KeyValues KeyValues::parse_string(const std::string& text, const std::string& origin) {
    KeyValues kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw config_error(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        kv.values_[full] = val;
        kv.lines_[full] = lineno;
    }
    return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("config file not readable: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

bool KeyValues::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValues::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

void KeyValues::fail(const std::string& key, const std::string& what) const {
    auto it = lines_.find(key);
    const std::string where =
        it == lines_.end() ? origin_ : origin_ + ":" + std::to_string(it->second);
    throw config_error(where + ": " + what + " (key '" + key + "')");
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size())
            fail(key, "trailing characters after number '" + it->second + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(key, "expected a number, got '" + it->second + "'");
    } catch (const std::out_of_range&) {
        fail(key, "number out of range: '" + it->second + "'");
    }
}

int KeyValues::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(it->second, &pos);
        if (pos != it->second.size())
            fail(key, "trailing characters after integer '" + it->second + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(key, "expected an integer, got '" + it->second + "'");
    } catch (const std::out_of_range&) {
        fail(key, "integer out of range: '" + it->second + "'");
    }
}

std::vector<std::string> KeyValues::get_list(const std::string& key) const {
    std::vector<std::string> out;
    auto it = values_.find(key);
    if (it == values_.end())
        return out;
    std::istringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

families::FGCouple couple_from_descriptor(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    const std::string name = colon == std::string::npos ? descriptor : descriptor.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
    auto param = [&](double fallback) {
        if (arg.empty())
            return fallback;
        try {
            return std::stod(arg);
        } catch (...) {
            throw input_error("couple descriptor '" + descriptor + "': bad parameter");
        }
    };
    if (name == "gap_pow_delta")
        return families::FGCouple::gap_pow_delta(param(2.0));
    if (name == "one_gap_alpha")
        return families::FGCouple::one_gap_alpha(param(1.0));
    if (name == "gap_gap_beta")
        return families::FGCouple::gap_gap_beta(param(0.5));
    if (name == "custom_power")
        return families::FGCouple::power_probe(param(3.0));
    if (name == "custom")
        return families::FGCouple::custom_from_file(arg);
    throw input_error("unknown couple family: " + name);
}

namespace {

discretize::DomainSpec domain_from(const KeyValues& kv) {
    discretize::DomainSpec d;
    const std::string kind = kv.get("domain.kind", "");
    if (kind == "beam")
        d.kind = discretize::DomainKind::beam;
    else if (kind == "rectangle")
        d.kind = discretize::DomainKind::rectangle;
    else if (kind == "disk" || kind == "geodesic_disk")
        d.kind = discretize::DomainKind::geodesic_disk;
    else
        throw config_error("domain.kind must be beam, rectangle or disk (got '" + kind + "')");

    d.length = kv.get_double("domain.length", 1.0);
    d.a = kv.get_double("domain.a", 1.0);
    d.b = kv.get_double("domain.b", 1.0);
    d.curvature = kv.get_int("domain.kappa", 0);
    d.radius = kv.get_double("domain.radius", 1.0);
    d.grid_n = kv.get_int("domain.grid_n", 64);
    d.m_max = kv.get_int("domain.m_max", -1);
    if (kv.has("domain.potential_const")) {
        const double q = kv.get_double("domain.potential_const", 0.0);
        d.potential = [q](double, double) { return q; };
    }
    if (kv.has("domain.weight_const")) {
        const double w = kv.get_double("domain.weight_const", 1.0);
        d.weight = [w](double, double) { return w; };
    }
    return d;
}

} // namespace

ExperimentConfig ExperimentConfig::from_values(const KeyValues& kv) {
    ExperimentConfig cfg;
    if (kv.has("domain.kind")) {
        cfg.domain = domain_from(kv);
        cfg.has_domain = true;
    }
    cfg.k_max = kv.get_int("solve.k_max", 10);
    if (cfg.k_max < 2)
        throw config_error("solve.k_max must be >= 2");

    // context defaults derive from the domain, overrides come from [context]
    bounds::BoundContext ctx;
    if (cfg.has_domain) {
        ctx.n = cfg.domain.dimension();
        if (cfg.domain.kind == discretize::DomainKind::geodesic_disk) {
            if (cfg.domain.curvature == 1) {
                ctx.geometry = bounds::GeometryClass::sphere;
                ctx.delta_prime = 1.0; // domain of the sphere itself: H = 0
            } else if (cfg.domain.curvature == -1) {
                ctx.geometry = bounds::GeometryClass::hyperbolic;
            } else {
                ctx.geometry = bounds::GeometryClass::flat;
                ctx.delta = 0.0;
            }
        } else {
            ctx.geometry = bounds::GeometryClass::flat;
            ctx.delta = 0.0;
        }
        if (kv.has("domain.potential_const"))
            ctx.q_inf = kv.get_double("domain.potential_const", 0.0);
    }
    ctx.n = kv.get_int("context.n", ctx.n);
    if (kv.has("context.geometry"))
        ctx.geometry = bounds::geometry_from_string(kv.get("context.geometry", "flat"));
    if (kv.has("context.delta"))
        ctx.delta = kv.get_double("context.delta", 0.0);
    if (kv.has("context.delta_immersion")) {
        // sup |H|^2 sampled from a catalog immersion, e.g. torus_of_revolution:2,1
        auto imm = geometry::by_name(kv.get("context.delta_immersion", ""));
        ctx.delta = geometry::delta_sup(imm, 48, 48).value;
    }
    if (kv.has("context.delta_prime"))
        ctx.delta_prime = kv.get_double("context.delta_prime", 1.0);
    if (kv.has("context.lambda_map"))
        ctx.lambda_map = kv.get_double("context.lambda_map", 1.0);
    ctx.q_inf = kv.get_double("context.q_inf", ctx.q_inf);
    cfg.context = ctx;

    for (const auto& name : kv.get_list("verify.ids"))
        cfg.verify_ids.push_back(bounds::id_from_string(name));
    for (const auto& desc : kv.get_list("verify.couples"))
        cfg.couples.push_back(couple_from_descriptor(desc));
    if (cfg.couples.empty()) {
        cfg.couples.push_back(families::FGCouple::gap_pow_delta(2.0));
        cfg.couples.push_back(families::FGCouple::one_gap_alpha(1.0));
        cfg.couples.push_back(families::FGCouple::gap_gap_beta(0.5));
    }
    cfg.verify_k_min = kv.get_int("verify.k_min", 1);
    cfg.verify_k_max = kv.get_int("verify.k_max", cfg.k_max - 1);
    cfg.tol_rel = kv.get_double("verify.tol_rel", 1e-10);
    cfg.spectrum_csv = kv.get("verify.spectrum_csv", "");

    for (const auto& name : kv.get_list("bound.ids"))
        cfg.bound_ids.push_back(bounds::id_from_string(name));
    if (cfg.bound_ids.empty())
        cfg.bound_ids.push_back(bounds::InequalityId::cim_flat_l2);
    cfg.bound_k_min = kv.get_int("bound.k_min", 1);
    cfg.bound_k_max = kv.get_int("bound.k_max", cfg.k_max - 1);

    cfg.out_dir = kv.get("output.dir", "out");
    cfg.seed = static_cast<std::uint64_t>(kv.get_int("abstract.seed", 1));
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    return from_values(KeyValues::parse_file(path));
}

} // namespace platelab::config

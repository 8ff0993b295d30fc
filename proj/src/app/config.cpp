#include "subpress/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace subpress::app {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration:";
    for (const auto& p : problems) out += "\n  " + p;
    return out;
}

/// Collects problems instead of stopping at the first one.
class Reader {
public:
    std::vector<std::string> problems;

    void fail(const std::string& path, const std::string& msg) { problems.push_back(path + ": " + msg); }

    template <class T>
    std::optional<T> get(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        try {
            return obj.at(key).get<T>();
        } catch (const json::exception&) {
            fail(path + key, "has the wrong type");
            return std::nullopt;
        }
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj.at(key).is_number()) {
            fail(path + key, "must be a number");
            return std::nullopt;
        }
        return obj.at(key).get<double>();
    }

    std::optional<std::size_t> count(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            fail(path + key, "must be a non-negative integer");
            return std::nullopt;
        }
        return v.get<std::size_t>();
    }

    std::vector<double> reals(const json& v, const std::string& path) {
        std::vector<double> out;
        if (!v.is_array()) {
            fail(path, "must be an array of numbers");
            return out;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                fail(path + "[" + std::to_string(i) + "]", "must be a number");
                continue;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }
};

void parse_grid(Reader& r, const json& obj, const std::string& path, TGridSpec& grid) {
    if (!obj.is_object()) {
        r.fail(path, "must be an object");
        return;
    }
    if (auto v = r.number(obj, "min", path + ".")) grid.min = *v;
    if (auto v = r.number(obj, "max", path + ".")) grid.max = *v;
    if (auto v = r.count(obj, "points", path + ".")) grid.points = *v;
    if (auto v = r.get<std::string>(obj, "scale", path + ".")) grid.scale = *v;
    if (auto v = r.get<bool>(obj, "include_zero", path + ".")) grid.include_zero = *v;
    if (grid.scale != "linear" && grid.scale != "geometric") r.fail(path + ".scale", "must be linear or geometric");
    if (grid.points < 1) r.fail(path + ".points", "must be >= 1");
    if (!(grid.min >= 0.0)) r.fail(path + ".min", "must be >= 0");
    if (!(grid.max >= grid.min)) r.fail(path + ".max", "must be >= min");
    if (grid.scale == "geometric" && !(grid.min > 0.0)) r.fail(path + ".min", "must be > 0 on a geometric grid");
    if (grid.points == 1 && grid.max != grid.min) r.fail(path + ".points", "a single point needs min == max");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> list) : Error(join_problems(list)), problems(std::move(list)) {}

std::vector<double> TGridSpec::values() const {
    std::vector<double> out;
    if (include_zero && min > 0.0) out.push_back(0.0);
    for (std::size_t i = 0; i < points; ++i) {
        if (points == 1) {
            out.push_back(min);
            break;
        }
        const double frac = static_cast<double>(i) / static_cast<double>(points - 1);
        double v = scale == "geometric" ? min * std::pow(max / min, frac) : min + (max - min) * frac;
        if (i == points - 1) v = max;
        out.push_back(v);
    }
    return out;
}

SftSpec RunConfig::sft() const { return full_shift ? SftSpec::full(k) : SftSpec::from_matrix(transitions); }

Potential RunConfig::make_potential() const {
    if (potential == "additive") return Potential(AdditivePotential{additive});
    std::vector<Matrix> mats;
    for (const auto& rows : matrices) mats.push_back(Matrix::from_rows(rows));
    return Potential(MatrixSet(std::move(mats)));
}

RunConfig parse_config(const json& doc) {
    Reader r;
    RunConfig cfg;
    if (!doc.is_object()) throw ConfigError({"<root>: configuration must be a JSON object"});

    static const std::vector<std::string> known = {"system", "potential", "matrices", "additive", "t_grid",
                                                   "convexity_grid", "levels", "search", "mc", "close", "seed",
                                                   "threads", "output", "experimental"};
    for (const auto& [key, value] : doc.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) r.fail(key, "unknown field");

    // Potential first: it fixes k when the system is a bare full shift.
    if (auto v = r.get<std::string>(doc, "potential", "")) cfg.potential = *v;
    if (cfg.potential != "matrix_norm" && cfg.potential != "additive")
        r.fail("potential", "must be matrix_norm or additive");

    std::size_t potential_k = 0;
    if (cfg.potential == "matrix_norm") {
        if (!doc.contains("matrices")) {
            r.fail("matrices", "required for the matrix_norm potential");
        } else if (!doc["matrices"].is_array() || doc["matrices"].empty()) {
            r.fail("matrices", "must be a non-empty array of square matrices");
        } else {
            const json& mats = doc["matrices"];
            for (std::size_t i = 0; i < mats.size(); ++i) {
                const std::string path = "matrices[" + std::to_string(i) + "]";
                std::vector<std::vector<double>> rows;
                if (!mats[i].is_array() || mats[i].empty()) {
                    r.fail(path, "must be a non-empty array of rows");
                    continue;
                }
                for (std::size_t row = 0; row < mats[i].size(); ++row)
                    rows.push_back(r.reals(mats[i][row], path + "[" + std::to_string(row) + "]"));
                cfg.matrices.push_back(std::move(rows));
            }
            potential_k = cfg.matrices.size();
            try {
                std::vector<Matrix> parsed;
                for (const auto& rows : cfg.matrices) parsed.push_back(Matrix::from_rows(rows));
                (void)MatrixSet(std::move(parsed));
            } catch (const std::invalid_argument& e) {
                r.fail("matrices", e.what());
            }
        }
    } else if (cfg.potential == "additive") {
        if (!doc.contains("additive")) {
            r.fail("additive", "required for the additive potential");
        } else {
            cfg.additive = r.reals(doc["additive"], "additive");
            if (cfg.additive.empty()) r.fail("additive", "must not be empty");
            for (std::size_t i = 0; i < cfg.additive.size(); ++i)
                if (!std::isfinite(cfg.additive[i])) r.fail("additive[" + std::to_string(i) + "]", "must be finite");
            potential_k = cfg.additive.size();
        }
    }

    cfg.k = potential_k;
    if (doc.contains("system")) {
        const json& sys = doc["system"];
        if (!sys.is_object()) {
            r.fail("system", "must be an object");
        } else if (sys.contains("full")) {
            if (auto k = r.count(sys, "full", "system.")) {
                cfg.full_shift = true;
                cfg.k = *k;
            }
        } else {
            cfg.full_shift = false;
            if (auto k = r.count(sys, "k", "system.")) cfg.k = *k;
            else r.fail("system.k", "required unless `full` is given");
            if (!sys.contains("transitions") || !sys["transitions"].is_array()) {
                r.fail("system.transitions", "required k x k array of 0/1");
            } else {
                const json& rows = sys["transitions"];
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    std::vector<int> row;
                    if (!rows[i].is_array()) {
                        r.fail("system.transitions[" + std::to_string(i) + "]", "must be an array");
                        continue;
                    }
                    for (std::size_t j = 0; j < rows[i].size(); ++j) {
                        const json& e = rows[i][j];
                        if (!e.is_number_integer() || (e.get<int>() != 0 && e.get<int>() != 1))
                            r.fail("system.transitions[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                   "must be 0 or 1");
                        else row.push_back(e.get<int>());
                    }
                    cfg.transitions.push_back(std::move(row));
                }
                if (cfg.transitions.size() != cfg.k)
                    r.fail("system.transitions", "must have k rows");
                else {
                    try {
                        (void)SftSpec::from_matrix(cfg.transitions);
                    } catch (const std::invalid_argument& e) {
                        r.fail("system.transitions", e.what());
                    }
                }
            }
        }
    }
    if (cfg.k == 0 || cfg.k > kMaxAlphabet) r.fail("system", "alphabet size must be in [1, 36]");
    if (potential_k != 0 && cfg.k != potential_k)
        r.fail("system", "alphabet size " + std::to_string(cfg.k) + " does not match the " +
                             std::to_string(potential_k) + " potential entries");
    // Full-shift configs keep no transition matrix in their canonical form.
    if (cfg.full_shift) cfg.transitions.clear();
    else if (!cfg.transitions.empty() && cfg.transitions.size() == cfg.k) {
        bool all = true;
        for (const auto& row : cfg.transitions)
            for (int v : row) all = all && v == 1;
        if (all) {
            cfg.full_shift = true;
            cfg.transitions.clear();
        }
    }

    if (doc.contains("t_grid")) parse_grid(r, doc["t_grid"], "t_grid", cfg.t_grid);
    if (doc.contains("convexity_grid")) parse_grid(r, doc["convexity_grid"], "convexity_grid", cfg.convexity_grid);

    if (doc.contains("levels")) {
        cfg.levels.clear();
        const json& lv = doc["levels"];
        if (!lv.is_array() || lv.empty()) r.fail("levels", "must be a non-empty array of positive integers");
        else
            for (std::size_t i = 0; i < lv.size(); ++i) {
                if (!lv[i].is_number_integer() || lv[i].get<long long>() < 1)
                    r.fail("levels[" + std::to_string(i) + "]", "must be a positive integer");
                else cfg.levels.push_back(lv[i].get<std::size_t>());
            }
    }

    cfg.search = SearchConfig::defaults_for(cfg.k == 0 ? 2 : cfg.k);
    if (doc.contains("search")) {
        const json& s = doc["search"];
        if (!s.is_object()) r.fail("search", "must be an object");
        else {
            if (auto v = r.count(s, "n_exact", "search.")) cfg.search.n_exact = *v;
            if (auto v = r.number(s, "beam_delta", "search.")) cfg.search.beam_delta = *v;
            if (auto v = r.count(s, "max_depth", "search.")) cfg.search.max_depth = *v;
            if (auto v = r.count(s, "beam_width", "search.")) cfg.search.beam_width = *v;
            if (auto v = r.number(s, "time_budget_s", "search.")) cfg.search.time_budget_s = *v;
            if (auto v = r.get<std::uint64_t>(s, "seed", "search.")) cfg.search.seed = *v;
        }
    }
    try {
        cfg.search.validate();
    } catch (const std::invalid_argument& e) {
        r.fail("search", e.what());
    }

    if (doc.contains("mc")) {
        const json& m = doc["mc"];
        if (!m.is_object()) r.fail("mc", "must be an object");
        else {
            if (m.contains("p")) cfg.mc.p = r.reals(m["p"], "mc.p");
            if (auto v = r.count(m, "n", "mc.")) cfg.mc.n = *v;
            if (auto v = r.count(m, "samples", "mc.")) cfg.mc.samples = *v;
            if (m.contains("deltas")) cfg.mc.deltas = r.reals(m["deltas"], "mc.deltas");
            if (auto v = r.get<std::string>(m, "perturb", "mc.")) cfg.mc.perturb = *v;
        }
    }
    if (!cfg.mc.p.empty() && cfg.mc.p.size() != cfg.k) r.fail("mc.p", "must have k entries");
    if (cfg.mc.n < 100) r.fail("mc.n", "must be >= 100");
    if (cfg.mc.samples < 100) r.fail("mc.samples", "must be >= 100");
    if (cfg.mc.perturb != "matrices" && cfg.mc.perturb != "measure") r.fail("mc.perturb", "must be matrices or measure");
    for (double d : cfg.mc.deltas)
        if (!(d >= 0.0)) r.fail("mc.deltas", "entries must be >= 0");

    if (doc.contains("close")) {
        const json& c = doc["close"];
        if (!c.is_object()) r.fail("close", "must be an object");
        else {
            if (c.contains("p")) cfg.close.p = r.reals(c["p"], "close.p");
            if (auto v = r.count(c, "length", "close.")) cfg.close.length = *v;
        }
    }
    if (!cfg.close.p.empty() && cfg.close.p.size() != cfg.k) r.fail("close.p", "must have k entries");
    if (cfg.close.length < 100) r.fail("close.length", "must be >= 100");

    if (auto v = r.get<std::uint64_t>(doc, "seed", "")) cfg.seed = *v;
    if (auto v = r.count(doc, "threads", "")) cfg.threads = *v;
    if (auto v = r.get<bool>(doc, "experimental", "")) cfg.experimental = *v;
    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (!o.is_object()) r.fail("output", "must be an object");
        else if (auto v = r.get<std::string>(o, "dir", "output.")) cfg.out_dir = *v;
    }

    if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open configuration file"});
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({path + ": " + e.what()});
    }
    return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
    json doc;
    if (cfg.full_shift) doc["system"] = {{"full", cfg.k}};
    else doc["system"] = {{"k", cfg.k}, {"transitions", cfg.transitions}};
    doc["potential"] = cfg.potential;
    if (cfg.potential == "additive") doc["additive"] = cfg.additive;
    else doc["matrices"] = cfg.matrices;
    auto grid = [](const TGridSpec& g) {
        return json{{"min", g.min}, {"max", g.max}, {"points", g.points}, {"scale", g.scale},
                    {"include_zero", g.include_zero}};
    };
    doc["t_grid"] = grid(cfg.t_grid);
    doc["convexity_grid"] = grid(cfg.convexity_grid);
    doc["levels"] = cfg.levels;
    doc["search"] = {{"n_exact", cfg.search.n_exact},       {"beam_delta", cfg.search.beam_delta},
                     {"max_depth", cfg.search.max_depth},   {"beam_width", cfg.search.beam_width},
                     {"time_budget_s", cfg.search.time_budget_s}, {"seed", cfg.search.seed}};
    doc["mc"] = {{"p", cfg.mc.p},
                 {"n", cfg.mc.n},
                 {"samples", cfg.mc.samples},
                 {"deltas", cfg.mc.deltas},
                 {"perturb", cfg.mc.perturb}};
    doc["close"] = {{"p", cfg.close.p}, {"length", cfg.close.length}};
    doc["seed"] = cfg.seed;
    doc["threads"] = cfg.threads;
    doc["experimental"] = cfg.experimental;
    doc["output"] = {{"dir", cfg.out_dir}};
    return doc;
}

std::string config_hash(const RunConfig& cfg) {
    json echo = to_json(cfg);
    // Output location and worker count do not change results.
    echo.erase("output");
    echo.erase("threads");
    const std::string text = echo.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace subpress::app

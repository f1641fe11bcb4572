#include "secord/instance_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "secord/errors.hpp"

namespace secord {

using nlohmann::json;

namespace {

constexpr std::string_view kFormat = "secord-instance";
constexpr int kVersion = 1;

std::string position_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void reject_unknown(const json &object, std::initializer_list<std::string_view> known, const std::string &where) {
    for (const auto &[key, value] : object.items()) {
        bool ok = false;
        for (auto k : known)
            ok = ok || key == k;
        if (!ok)
            throw ParseError(where + ": unknown field '" + key + "'");
    }
}

std::string label_of(const json &v, const std::string &where) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    throw ParseError(where + ": values must be strings or integers");
}

const json &require(const json &object, const char *key, const std::string &where) {
    auto it = object.find(key);
    if (it == object.end())
        throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

} // namespace

Instance make_instance(ConstraintNetwork network) {
    Instance inst;
    for (VarId x = 0; x < network.num_variables(); ++x) {
        inst.variable_names.push_back("x" + std::to_string(x));
        std::vector<std::string> values;
        for (int a = 0; a < network.domain(x).initial_size(); ++a)
            values.push_back(std::to_string(a));
        inst.value_names.push_back(std::move(values));
    }
    inst.network = std::move(network);
    return inst;
}

Instance parse_instance(std::string_view text, const ParseOptions &options) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ParseError("syntax error at " + position_of(text, e.byte) + ": " + e.what());
    }
    if (!doc.is_object())
        throw ParseError("document: expected a JSON object");
    if (options.strict)
        reject_unknown(doc, {"format", "version", "variables", "constraints", "metadata"}, "document");
    if (auto it = doc.find("format"); it != doc.end() && *it != kFormat)
        throw ParseError("document: unsupported format " + it->dump());
    if (auto it = doc.find("version"); it != doc.end() && *it != kVersion)
        throw ParseError("document: unsupported version " + it->dump());

    Instance inst;
    std::map<std::string, VarId> var_index;
    std::vector<std::map<std::string, Value>> value_index;
    std::vector<int> sizes;

    const json &vars = require(doc, "variables", "document");
    if (!vars.is_array())
        throw ParseError("document: 'variables' must be an array");
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const json &v = vars[i];
        std::string where = "variable " + std::to_string(i);
        if (!v.is_object())
            throw ParseError(where + ": expected an object");
        if (options.strict)
            reject_unknown(v, {"name", "values"}, where);
        const json &nm = require(v, "name", where);
        if (!nm.is_string())
            throw ParseError(where + ": 'name' must be a string");
        std::string name = nm.get<std::string>();
        if (!var_index.emplace(name, static_cast<VarId>(i)).second)
            throw ParseError(where + ": duplicate variable name '" + name + "'");
        const json &vals = require(v, "values", where);
        if (!vals.is_array() || vals.empty())
            throw ParseError(where + ": 'values' must be a non-empty array");
        std::map<std::string, Value> index;
        std::vector<std::string> labels;
        for (const auto &val : vals) {
            std::string label = label_of(val, where);
            if (!index.emplace(label, static_cast<Value>(labels.size())).second)
                throw ParseError(where + ": duplicate value '" + label + "'");
            labels.push_back(label);
        }
        inst.variable_names.push_back(name);
        inst.value_names.push_back(std::move(labels));
        value_index.push_back(std::move(index));
        sizes.push_back(static_cast<int>(vals.size()));
    }

    std::vector<ConstraintSpec> specs;
    const json empty = json::array();
    auto cit = doc.find("constraints");
    const json &cons = cit == doc.end() ? empty : *cit;
    if (!cons.is_array())
        throw ParseError("document: 'constraints' must be an array");
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const json &c = cons[i];
        std::string where = "constraint " + std::to_string(i);
        if (!c.is_object())
            throw ParseError(where + ": expected an object");
        if (options.strict)
            reject_unknown(c, {"scope", "polarity", "tuples"}, where);
        ConstraintSpec spec;
        const json &scope = require(c, "scope", where);
        if (!scope.is_array() || scope.empty())
            throw ParseError(where + ": 'scope' must be a non-empty array of variable names");
        for (const auto &s : scope) {
            if (!s.is_string())
                throw ParseError(where + ": scope entries must be variable names");
            auto it = var_index.find(s.get<std::string>());
            if (it == var_index.end())
                throw ParseError(where + ": unknown variable '" + s.get<std::string>() + "'");
            if (std::find(spec.scope.begin(), spec.scope.end(), it->second) != spec.scope.end())
                throw ParseError(where + ": variable '" + s.get<std::string>() + "' repeated in scope");
            spec.scope.push_back(it->second);
        }
        const json &pol = require(c, "polarity", where);
        if (pol == "supports")
            spec.polarity = Polarity::supports;
        else if (pol == "conflicts")
            spec.polarity = Polarity::conflicts;
        else
            throw ParseError(where + ": polarity must be \"supports\" or \"conflicts\"");
        const json &tuples = require(c, "tuples", where);
        if (!tuples.is_array())
            throw ParseError(where + ": 'tuples' must be an array");
        for (const auto &row : tuples) {
            if (!row.is_array() || row.size() != spec.scope.size())
                throw ParseError(where + ": tuple arity does not match the scope");
            Tuple t;
            for (std::size_t k = 0; k < row.size(); ++k) {
                VarId x = spec.scope[k];
                std::string label = label_of(row[k], where);
                auto &index = value_index[static_cast<std::size_t>(x)];
                auto it = index.find(label);
                if (it == index.end())
                    throw ParseError(where + ": value '" + label + "' is not in the domain of '" +
                                     inst.variable_names[static_cast<std::size_t>(x)] + "'");
                t.push_back(it->second);
            }
            spec.tuples.push_back(std::move(t));
        }
        specs.push_back(std::move(spec));
    }

    if (auto it = doc.find("metadata"); it != doc.end()) {
        if (!it->is_object())
            throw ParseError("document: 'metadata' must be an object");
        inst.metadata = *it;
    }
    try {
        inst.network = build_network(sizes, specs);
    } catch (const ModelError &e) {
        throw ParseError(std::string("invalid network: ") + e.what());
    }
    return inst;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Instance read_instance(const std::filesystem::path &path, const ParseOptions &options) {
    std::string text = read_file(path);
    try {
        return parse_instance(text, options);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string serialize_instance(const Instance &inst) {
    const auto &net = inst.network;
    json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    auto value = [&](VarId x, Value a) { return inst.value_names[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)]; };

    json vars = json::array();
    for (VarId x = 0; x < net.num_variables(); ++x)
        vars.push_back({{"name", inst.variable_names[static_cast<std::size_t>(x)]},
                        {"values", inst.value_names[static_cast<std::size_t>(x)]}});
    doc["variables"] = std::move(vars);

    json cons = json::array();
    for (VarId x = 0; x < net.num_variables(); ++x) {
        const auto &d = net.domain(x);
        if (d.size() == d.initial_size())
            continue;
        json rows = json::array();
        for (Value a : d.values())
            rows.push_back(json::array({value(x, a)}));
        cons.push_back({{"scope", json::array({inst.variable_names[static_cast<std::size_t>(x)]})},
                        {"polarity", "supports"},
                        {"tuples", std::move(rows)}});
    }
    for (const auto &c : net.constraints()) {
        json scope = json::array();
        for (VarId x : c.scope())
            scope.push_back(inst.variable_names[static_cast<std::size_t>(x)]);
        json rows = json::array();
        for (const auto &t : c.table()) {
            json row = json::array();
            for (std::size_t k = 0; k < t.size(); ++k)
                row.push_back(value(c.scope()[k], t[k]));
            rows.push_back(std::move(row));
        }
        cons.push_back({{"scope", std::move(scope)},
                        {"polarity", c.polarity() == Polarity::supports ? "supports" : "conflicts"},
                        {"tuples", std::move(rows)}});
    }
    doc["constraints"] = std::move(cons);
    if (!inst.metadata.empty())
        doc["metadata"] = inst.metadata;
    return doc.dump(1) + "\n";
}

void write_file_atomically(const std::filesystem::path &path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ParseError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out)
            throw ParseError("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw ParseError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void write_instance(const std::filesystem::path &path, const Instance &instance) {
    write_file_atomically(path, serialize_instance(instance));
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace secord

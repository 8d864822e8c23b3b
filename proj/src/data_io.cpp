#include "kayasim/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kayasim/errors.hpp"

namespace kayasim {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kBundleFileName = "bundle.json";

std::string format_full(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed while reading " + path.string());
    }
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("failed while writing " + path.string());
    }
}

bool clean_identifier(const std::string& value)
{
    if (value.empty()) {
        return false;
    }
    return value.find(',') == std::string::npos && value.find('\n') == std::string::npos
        && value.find('\r') == std::string::npos;
}

// --- bundle.json parsing -------------------------------------------------

class IssueSink {
public:
    IssueSink(std::vector<ValidationIssue>& issues, std::string file)
        : issues_(issues), file_(std::move(file))
    {
    }

    void add(const std::string& field, const std::string& message, int line = 0)
    {
        issues_.push_back(ValidationIssue{file_, line, field, message});
    }

    const std::string& file() const { return file_; }

private:
    std::vector<ValidationIssue>& issues_;
    std::string file_;
};

const json* object_member(const json& parent, const char* key)
{
    auto it = parent.find(key);
    if (it == parent.end()) {
        return nullptr;
    }
    return &*it;
}

std::optional<std::string> take_string(const json& parent, const char* key,
                                       const std::string& field, bool required,
                                       IssueSink& sink)
{
    const json* node = object_member(parent, key);
    if (node == nullptr) {
        if (required) {
            sink.add(field, "required field is missing");
        }
        return std::nullopt;
    }
    if (!node->is_string()) {
        sink.add(field, "expected a string");
        return std::nullopt;
    }
    return node->get<std::string>();
}

std::optional<double> take_number(const json& parent, const char* key,
                                  const std::string& field, bool required,
                                  IssueSink& sink)
{
    const json* node = object_member(parent, key);
    if (node == nullptr) {
        if (required) {
            sink.add(field, "required field is missing");
        }
        return std::nullopt;
    }
    if (!node->is_number()) {
        sink.add(field, "expected a number");
        return std::nullopt;
    }
    return node->get<double>();
}

std::optional<std::int64_t> take_integer(const json& parent, const char* key,
                                         const std::string& field, bool required,
                                         IssueSink& sink)
{
    const json* node = object_member(parent, key);
    if (node == nullptr) {
        if (required) {
            sink.add(field, "required field is missing");
        }
        return std::nullopt;
    }
    if (!node->is_number_integer()) {
        sink.add(field, "expected an integer");
        return std::nullopt;
    }
    return node->get<std::int64_t>();
}

void parse_region_map(const json& root, RegionMapping& map, IssueSink& sink)
{
    const json* node = object_member(root, "region_map");
    if (node == nullptr) {
        sink.add("region_map", "required field is missing");
        return;
    }
    if (!node->is_object()) {
        sink.add("region_map", "expected an object mapping province to region");
        return;
    }
    const auto& regions = canonical_regions();
    for (auto it = node->begin(); it != node->end(); ++it) {
        const std::string& province = it.key();
        const std::string field = "region_map." + province;
        if (!clean_identifier(province)) {
            sink.add("region_map", "province name is empty or contains a delimiter");
            continue;
        }
        if (province == "national") {
            sink.add(field, "\"national\" is reserved for the aggregate and cannot name a province");
            continue;
        }
        if (!it.value().is_string()) {
            sink.add(field, "expected a region name string");
            continue;
        }
        const std::string region = it.value().get<std::string>();
        if (std::find(regions.begin(), regions.end(), region) == regions.end()) {
            sink.add(field, "unknown region \"" + region + "\" (expected one of the seven canonical regions)");
            continue;
        }
        map.province_to_region.emplace(province, region);
    }
    if (map.province_to_region.empty()) {
        sink.add("region_map", "at least one province is required");
    }
}

void parse_uncertainty(const json& root, UncertaintyConfig& config, IssueSink& sink)
{
    const json* node = object_member(root, "uncertainty");
    if (node == nullptr) {
        sink.add("uncertainty", "required field is missing");
        return;
    }
    if (!node->is_object()) {
        sink.add("uncertainty", "expected an object");
        return;
    }
    if (auto mode = take_string(*node, "mode", "uncertainty.mode", true, sink)) {
        try {
            config.mode = uncertainty_mode_from_string(*mode);
        } catch (const ValidationError& err) {
            sink.add("uncertainty.mode", err.what());
        }
    }
    if (auto v = take_number(*node, "sigma_c", "uncertainty.sigma_c", true, sink)) {
        config.sigma_c = *v;
    }
    struct SigmaField {
        const char* key;
        double* slot;
    };
    const SigmaField sigmas[] = {
        {"sigma_population", &config.sigma_population},
        {"sigma_floor_area", &config.sigma_floor_area},
        {"sigma_energy_intensity", &config.sigma_energy_intensity},
        {"sigma_carbon_intensity", &config.sigma_carbon_intensity},
    };
    for (const auto& field : sigmas) {
        if (auto v = take_number(*node, field.key, std::string("uncertainty.") + field.key,
                                 false, sink)) {
            *field.slot = *v;
        }
    }
    if (auto v = take_integer(*node, "draws", "uncertainty.draws", false, sink)) {
        if (*v <= 0) {
            sink.add("uncertainty.draws", "must be positive");
        } else {
            config.draws = static_cast<std::size_t>(*v);
        }
    }
    if (auto v = take_integer(*node, "seed", "uncertainty.seed", false, sink)) {
        if (*v < 0) {
            sink.add("uncertainty.seed", "must be non-negative");
        } else {
            config.seed = static_cast<std::uint64_t>(*v);
        }
    }
    if (auto v = take_integer(*node, "ramp_base_year", "uncertainty.ramp_base_year", false, sink)) {
        config.ramp_base_year = static_cast<int>(*v);
    }
    if (auto v = take_integer(*node, "ramp_end_year", "uncertainty.ramp_end_year", false, sink)) {
        config.ramp_end_year = static_cast<int>(*v);
    }
    if (config.ramp_end_year <= config.ramp_base_year) {
        sink.add("uncertainty.ramp_end_year", "must be after ramp_base_year");
    }
    const struct {
        const char* name;
        double value;
    } nonneg[] = {
        {"uncertainty.sigma_c", config.sigma_c},
        {"uncertainty.sigma_population", config.sigma_population},
        {"uncertainty.sigma_floor_area", config.sigma_floor_area},
        {"uncertainty.sigma_energy_intensity", config.sigma_energy_intensity},
        {"uncertainty.sigma_carbon_intensity", config.sigma_carbon_intensity},
    };
    for (const auto& entry : nonneg) {
        if (!(entry.value >= 0.0) || !std::isfinite(entry.value)) {
            sink.add(entry.name, "must be finite and non-negative");
        }
    }
}

struct ScenarioHeader {
    ScenarioSpec spec;       // anchors filled in later
    std::string anchors_file;
};

std::vector<ScenarioHeader> parse_scenario_headers(const json& root, IssueSink& sink)
{
    std::vector<ScenarioHeader> headers;
    const json* node = object_member(root, "scenarios");
    if (node == nullptr) {
        sink.add("scenarios", "required field is missing");
        return headers;
    }
    if (!node->is_array() || node->empty()) {
        sink.add("scenarios", "expected a non-empty array");
        return headers;
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < node->size(); ++i) {
        const json& entry = (*node)[i];
        const std::string prefix = "scenarios[" + std::to_string(i) + "]";
        if (!entry.is_object()) {
            sink.add(prefix, "expected an object");
            continue;
        }
        ScenarioHeader header;
        ScenarioSpec& spec = header.spec;
        if (auto name = take_string(entry, "name", prefix + ".name", true, sink)) {
            if (!clean_identifier(*name)) {
                sink.add(prefix + ".name", "scenario name is empty or contains a delimiter");
            } else if (!seen.insert(*name).second) {
                sink.add(prefix + ".name", "duplicate scenario name \"" + *name + "\"");
            } else {
                spec.name = *name;
            }
        }
        if (auto kind = take_string(entry, "kind", prefix + ".kind", true, sink)) {
            try {
                spec.kind = scenario_kind_from_string(*kind);
            } catch (const ValidationError& err) {
                sink.add(prefix + ".kind", err.what());
            }
        }
        if (auto year = take_integer(entry, "first_year", prefix + ".first_year", true, sink)) {
            spec.first_year = static_cast<int>(*year);
        }
        if (auto year = take_integer(entry, "last_year", prefix + ".last_year", true, sink)) {
            spec.last_year = static_cast<int>(*year);
        }
        if (spec.last_year < spec.first_year) {
            sink.add(prefix + ".last_year", "must not precede first_year");
        }
        if (spec.first_year < kEarliestAnchorYear || spec.last_year > kLatestAnchorYear) {
            sink.add(prefix, "horizon must lie within " + std::to_string(kEarliestAnchorYear)
                                 + ".." + std::to_string(kLatestAnchorYear));
        }
        if (auto interp = take_string(entry, "interpolation", prefix + ".interpolation", false, sink)) {
            try {
                spec.interpolation = interpolation_from_string(*interp);
            } catch (const ValidationError& err) {
                sink.add(prefix + ".interpolation", err.what());
            }
        }
        if (auto scope = take_string(entry, "bipg_scope", prefix + ".bipg_scope", false, sink)) {
            try {
                spec.bipg_scope = bipg_scope_from_string(*scope);
            } catch (const ValidationError& err) {
                sink.add(prefix + ".bipg_scope", err.what());
            }
        }
        if (auto file = take_string(entry, "anchors_file", prefix + ".anchors_file", true, sink)) {
            header.anchors_file = *file;
        }
        headers.push_back(std::move(header));
    }
    return headers;
}

// --- anchor table parsing ------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

std::string trimmed(const std::string& text)
{
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    return text.substr(begin, end - begin);
}

std::optional<int> parse_int(const std::string& text)
{
    const std::string t = trimmed(text);
    if (t.empty()) {
        return std::nullopt;
    }
    char* end = nullptr;
    errno = 0;
    const long value = std::strtol(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size()) {
        return std::nullopt;
    }
    return static_cast<int>(value);
}

std::optional<double> parse_double(const std::string& text)
{
    const std::string t = trimmed(text);
    if (t.empty()) {
        return std::nullopt;
    }
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size()) {
        return std::nullopt;
    }
    return value;
}

void load_anchor_table(const std::filesystem::path& path, ScenarioSpec& spec,
                       const RegionMapping& region_map,
                       std::vector<ValidationIssue>& issues)
{
    IssueSink sink(issues, path.filename().string());
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        sink.add("anchors_file", "cannot open file");
        return;
    }

    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trimmed(line).empty()) {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            const auto fields = split_csv_line(line);
            if (fields.size() != 4 || trimmed(fields[0]) != "province"
                || trimmed(fields[1]) != "parameter" || trimmed(fields[2]) != "year"
                || trimmed(fields[3]) != "value") {
                sink.add("header", "expected header \"province,parameter,year,value\"", line_no);
                return;
            }
            continue;
        }

        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            sink.add("row", "expected 4 comma-separated fields, found "
                                + std::to_string(fields.size()),
                     line_no);
            continue;
        }
        const std::string province = trimmed(fields[0]);
        const std::string param_name = trimmed(fields[1]);

        bool usable = true;
        if (province == "national") {
            sink.add("province",
                     "\"national\" is reserved for the aggregate and cannot name a province",
                     line_no);
            usable = false;
        } else if (!region_map.contains(province)) {
            sink.add("province", "province \"" + province + "\" is not in the region map",
                     line_no);
            usable = false;
        }

        std::optional<ParamKey> key;
        try {
            key = param_key_from_string(param_name);
        } catch (const ValidationError& err) {
            sink.add("parameter", err.what(), line_no);
            usable = false;
        }

        const auto year = parse_int(fields[2]);
        if (!year) {
            sink.add("year", "cannot parse \"" + trimmed(fields[2]) + "\" as an integer",
                     line_no);
            usable = false;
        }
        const auto value = parse_double(fields[3]);
        if (!value) {
            sink.add("value", "cannot parse \"" + trimmed(fields[3]) + "\" as a number",
                     line_no);
            usable = false;
        }
        if (!usable) {
            continue;
        }

        if (*year < spec.first_year || *year > spec.last_year) {
            sink.add("year", "anchor year " + std::to_string(*year)
                                 + " lies outside the scenario horizon "
                                 + std::to_string(spec.first_year) + ".."
                                 + std::to_string(spec.last_year),
                     line_no);
            continue;
        }
        if (!std::isfinite(*value)) {
            sink.add("value", "must be finite", line_no);
            continue;
        }
        if (*value < 0.0) {
            sink.add("value", param_name + " must be non-negative", line_no);
            continue;
        }
        if (is_share_param(*key) && *value > 1.0) {
            sink.add("value", param_name + " is a share and must lie in [0, 1]", line_no);
            continue;
        }

        AnchorSeries& series = spec.anchors[province][static_cast<std::size_t>(*key)];
        if (!series.empty() && series.back().year >= *year) {
            sink.add("year", "anchor years for " + province + "/" + param_name
                                 + " must be strictly increasing",
                     line_no);
            continue;
        }
        series.push_back(ParameterAnchor{*year, *value});
    }
    if (in.bad()) {
        sink.add("anchors_file", "failed while reading file");
        return;
    }
    if (!header_seen) {
        sink.add("anchors_file", "file is empty");
        return;
    }

    // Coverage: every mapped province appears, and each province defines
    // every parameter family at least once.
    for (const auto& [province, region] : region_map.province_to_region) {
        (void)region;
        auto it = spec.anchors.find(province);
        if (it == spec.anchors.end()) {
            sink.add("province", "scenario \"" + spec.name + "\" defines no anchors for province \""
                                     + province + "\"");
            continue;
        }
        for (std::size_t p = 0; p < static_cast<std::size_t>(kParamCount); ++p) {
            if (it->second[p].empty()) {
                sink.add(province + "." + to_string(static_cast<ParamKey>(p)),
                         "no anchors defined for this parameter");
            }
        }
    }
}

// --- report helpers ------------------------------------------------------

ordered_json peak_to_json(const Peak& peak)
{
    ordered_json j;
    j["year"] = peak.year;
    j["value"] = round_sig6(peak.value);
    return j;
}

Peak peak_from_json(const json& j, const std::string& context)
{
    if (!j.is_object() || !j.contains("year") || !j.contains("value")) {
        throw IoError(context + ": expected an object with year and value");
    }
    Peak peak;
    peak.year = j.at("year").get<int>();
    peak.value = j.at("value").get<double>();
    return peak;
}

ordered_json histogram_to_json(const Histogram& h)
{
    ordered_json j;
    ordered_json edges = ordered_json::array();
    for (double e : h.edges) {
        edges.push_back(round_sig6(e));
    }
    ordered_json counts = ordered_json::array();
    for (std::size_t c : h.counts) {
        counts.push_back(c);
    }
    j["edges"] = std::move(edges);
    j["counts"] = std::move(counts);
    return j;
}

Histogram histogram_from_json(const json& j, const std::string& context)
{
    if (!j.is_object() || !j.contains("edges") || !j.contains("counts")) {
        throw IoError(context + ": expected an object with edges and counts");
    }
    Histogram h;
    for (const auto& e : j.at("edges")) {
        h.edges.push_back(e.get<double>());
    }
    for (const auto& c : j.at("counts")) {
        h.counts.push_back(c.get<std::size_t>());
    }
    if (h.edges.size() != h.counts.size() + 1) {
        throw IoError(context + ": edges length must be counts length + 1");
    }
    return h;
}

constexpr const char* kPercentileNames[kPercentileLevels.size()] = {
    "p2_5", "p16", "p50", "p84", "p97_5",
};

std::filesystem::path resolve_doc_path(const std::filesystem::path& path,
                                       const char* default_name)
{
    if (std::filesystem::is_directory(path)) {
        return path / default_name;
    }
    return path;
}

void ensure_out_dir(const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec && !std::filesystem::is_directory(out_dir)) {
        throw IoError("cannot create output directory " + out_dir.string() + ": "
                      + ec.message());
    }
}

} // namespace

// --- DatasetBundle -------------------------------------------------------

const ScenarioSpec& DatasetBundle::scenario(const std::string& name) const
{
    for (const ScenarioSpec& spec : scenarios) {
        if (spec.name == name) {
            return spec;
        }
    }
    throw ValidationError("bundle \"" + meta.name + "\" has no scenario named \"" + name + "\"");
}

std::string ValidationIssue::str() const
{
    std::ostringstream out;
    out << file;
    if (line > 0) {
        out << ":" << line;
    }
    out << ": " << field << ": " << message;
    return out.str();
}

// --- load/save -----------------------------------------------------------

BundleLoadResult load_bundle(const std::filesystem::path& path)
{
    std::filesystem::path bundle_file = path;
    if (std::filesystem::is_directory(path)) {
        bundle_file = path / kBundleFileName;
    }
    const std::filesystem::path base_dir = bundle_file.parent_path();

    BundleLoadResult result;
    IssueSink sink(result.issues, bundle_file.filename().string());

    const std::string text = read_text_file(bundle_file);
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded()) {
        sink.add("document", "not valid structured data");
        return result;
    }
    if (!root.is_object()) {
        sink.add("document", "top level must be an object");
        return result;
    }

    DatasetBundle bundle;
    if (auto version = take_integer(root, "schema_version", "schema_version", true, sink)) {
        bundle.meta.schema_version = static_cast<int>(*version);
        if (*version != kSchemaVersion) {
            sink.add("schema_version", "unsupported version " + std::to_string(*version)
                                           + " (this build reads version "
                                           + std::to_string(kSchemaVersion) + ")");
        }
    }
    if (auto name = take_string(root, "name", "name", true, sink)) {
        bundle.meta.name = *name;
    }
    if (auto notes = take_string(root, "notes", "notes", false, sink)) {
        bundle.meta.notes = *notes;
    }
    if (auto created = take_string(root, "created", "created", false, sink)) {
        bundle.meta.created = *created;
    }

    parse_region_map(root, bundle.region_map, sink);
    parse_uncertainty(root, bundle.uncertainty, sink);

    auto headers = parse_scenario_headers(root, sink);
    for (ScenarioHeader& header : headers) {
        if (header.anchors_file.empty() || header.spec.name.empty()) {
            continue; // already reported
        }
        const std::filesystem::path anchors_path = base_dir / header.anchors_file;
        if (!std::filesystem::exists(anchors_path)) {
            sink.add("scenarios." + header.spec.name + ".anchors_file",
                     "file \"" + header.anchors_file + "\" does not exist");
            continue;
        }
        load_anchor_table(anchors_path, header.spec, bundle.region_map, result.issues);
        bundle.scenarios.push_back(std::move(header.spec));
    }

    if (!result.issues.empty()) {
        return result;
    }

    // Deep validation (horizon coverage, share sums at anchors, ...).
    // The loader's own checks should have caught everything; this is the
    // final guarantee that a returned bundle expands cleanly.
    for (const ScenarioSpec& spec : bundle.scenarios) {
        try {
            validate_spec(spec);
        } catch (const ValidationError& err) {
            sink.add("scenarios." + spec.name, err.what());
        }
    }
    if (!result.issues.empty()) {
        return result;
    }

    result.bundle = std::move(bundle);
    return result;
}

void save_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir)
{
    ensure_out_dir(dir);

    ordered_json root;
    root["schema_version"] = bundle.meta.schema_version;
    root["name"] = bundle.meta.name;
    if (!bundle.meta.notes.empty()) {
        root["notes"] = bundle.meta.notes;
    }
    if (!bundle.meta.created.empty()) {
        root["created"] = bundle.meta.created;
    }

    ordered_json region_map = ordered_json::object();
    for (const auto& [province, region] : bundle.region_map.province_to_region) {
        region_map[province] = region;
    }
    root["region_map"] = std::move(region_map);

    ordered_json uncertainty;
    uncertainty["mode"] = to_string(bundle.uncertainty.mode);
    uncertainty["sigma_c"] = bundle.uncertainty.sigma_c;
    uncertainty["sigma_population"] = bundle.uncertainty.sigma_population;
    uncertainty["sigma_floor_area"] = bundle.uncertainty.sigma_floor_area;
    uncertainty["sigma_energy_intensity"] = bundle.uncertainty.sigma_energy_intensity;
    uncertainty["sigma_carbon_intensity"] = bundle.uncertainty.sigma_carbon_intensity;
    uncertainty["draws"] = bundle.uncertainty.draws;
    if (bundle.uncertainty.seed) {
        uncertainty["seed"] = *bundle.uncertainty.seed;
    }
    uncertainty["ramp_base_year"] = bundle.uncertainty.ramp_base_year;
    uncertainty["ramp_end_year"] = bundle.uncertainty.ramp_end_year;
    root["uncertainty"] = std::move(uncertainty);

    ordered_json scenarios = ordered_json::array();
    for (const ScenarioSpec& spec : bundle.scenarios) {
        ordered_json entry;
        entry["name"] = spec.name;
        entry["kind"] = to_string(spec.kind);
        entry["first_year"] = spec.first_year;
        entry["last_year"] = spec.last_year;
        entry["interpolation"] = to_string(spec.interpolation);
        entry["bipg_scope"] = to_string(spec.bipg_scope);
        entry["anchors_file"] = spec.name + "_anchors.csv";
        scenarios.push_back(std::move(entry));
    }
    root["scenarios"] = std::move(scenarios);

    write_text_file(dir / kBundleFileName, root.dump(2) + "\n");

    for (const ScenarioSpec& spec : bundle.scenarios) {
        std::ostringstream out;
        out << "province,parameter,year,value\n";
        for (const auto& [province, params] : spec.anchors) {
            for (std::size_t p = 0; p < static_cast<std::size_t>(kParamCount); ++p) {
                const char* param_name = to_string(static_cast<ParamKey>(p));
                for (const ParameterAnchor& anchor : params[p]) {
                    out << province << ',' << param_name << ',' << anchor.year << ','
                        << format_full(anchor.value) << '\n';
                }
            }
        }
        write_text_file(dir / (spec.name + "_anchors.csv"), out.str());
    }
}

// --- formatting ----------------------------------------------------------

ReportFormat report_format_from_string(const std::string& name)
{
    if (name == "csv") {
        return ReportFormat::Tabular;
    }
    if (name == "json") {
        return ReportFormat::Structured;
    }
    if (name == "both") {
        return ReportFormat::Both;
    }
    throw ValidationError("unknown report format \"" + name + "\" (expected csv, json, or both)");
}

double round_sig6(double value)
{
    if (!std::isfinite(value)) {
        return value;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return std::strtod(buf, nullptr);
}

std::string format_value(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

// --- static projection reports -------------------------------------------

namespace {

bool wants_tabular(ReportFormat f)
{
    return f == ReportFormat::Tabular || f == ReportFormat::Both;
}

bool wants_structured(ReportFormat f)
{
    return f == ReportFormat::Structured || f == ReportFormat::Both;
}

void append_projection_rows(std::ostringstream& series, std::ostringstream& peaks,
                            const ProvinceProjection& p)
{
    for (std::size_t i = 0; i < p.emissions.values.size(); ++i) {
        series << p.province << ',' << p.emissions.year_at(i) << ','
               << format_value(p.emissions.values[i]) << ','
               << format_value(p.energy.values[i]) << '\n';
    }
    peaks << p.province << ',' << p.emission_peak.year << ','
          << format_value(p.emission_peak.value) << ',' << p.energy_peak.year << ','
          << format_value(p.energy_peak.value) << '\n';
}

ordered_json projection_to_json(const ProvinceProjection& p)
{
    ordered_json j;
    j["name"] = p.province;
    j["emission_peak"] = peak_to_json(p.emission_peak);
    j["energy_peak"] = peak_to_json(p.energy_peak);
    ordered_json emissions = ordered_json::array();
    for (double v : p.emissions.values) {
        emissions.push_back(round_sig6(v));
    }
    ordered_json energy = ordered_json::array();
    for (double v : p.energy.values) {
        energy.push_back(round_sig6(v));
    }
    j["emissions_mtco2"] = std::move(emissions);
    j["energy_mtce"] = std::move(energy);
    return j;
}

} // namespace

void write_static_projection_reports(const StaticProjection& projection,
                                     const ScenarioSpec& spec, ReportFormat format,
                                     const std::filesystem::path& out_dir)
{
    ensure_out_dir(out_dir);

    if (wants_tabular(format)) {
        std::ostringstream series;
        std::ostringstream peaks;
        series << "province,year,emissions_mtco2,energy_mtce\n";
        peaks << "province,emission_peak_year,emission_peak_mtco2,"
                 "energy_peak_year,energy_peak_mtce\n";
        for (const ProvinceProjection& p : projection.provinces) {
            append_projection_rows(series, peaks, p);
        }
        append_projection_rows(series, peaks, projection.national);
        write_text_file(out_dir / "static_series.csv", series.str());
        write_text_file(out_dir / "static_peaks.csv", peaks.str());
    }

    if (wants_structured(format)) {
        ordered_json root;
        root["schema_version"] = kSchemaVersion;
        root["scenario"] = spec.name;
        root["kind"] = to_string(spec.kind);
        root["first_year"] = spec.first_year;
        root["last_year"] = spec.last_year;
        ordered_json provinces = ordered_json::array();
        for (const ProvinceProjection& p : projection.provinces) {
            provinces.push_back(projection_to_json(p));
        }
        root["provinces"] = std::move(provinces);
        root["national"] = projection_to_json(projection.national);
        write_text_file(out_dir / "static_projection.json", root.dump(2) + "\n");
    }
}

// --- simulation reports --------------------------------------------------

void write_simulation_reports(
    const SimulationResult& result,
    const std::vector<std::pair<std::string, UncertaintyBands>>& bands,
    ReportFormat format, const std::filesystem::path& out_dir)
{
    ensure_out_dir(out_dir);

    if (wants_tabular(format)) {
        std::ostringstream peaks;
        peaks << "unit,draws,mean_value,sd_value";
        for (const char* name : kPercentileNames) {
            peaks << ',' << name << "_value";
        }
        peaks << ",mean_year,sd_year";
        for (const char* name : kPercentileNames) {
            peaks << ',' << name << "_year";
        }
        peaks << '\n';
        for (const UnitSimulation& unit : result.units) {
            const PeakDistribution& d = unit.distribution;
            peaks << unit.name << ',' << d.draws << ',' << format_value(d.mean_value) << ','
                  << format_value(d.sd_value);
            for (double v : d.value_percentiles) {
                peaks << ',' << format_value(v);
            }
            peaks << ',' << format_value(d.mean_year) << ',' << format_value(d.sd_year);
            for (int y : d.year_percentiles) {
                peaks << ',' << y;
            }
            peaks << '\n';
        }
        write_text_file(out_dir / "peaks_summary.csv", peaks.str());

        std::ostringstream prob;
        prob << "unit,year,prob_peak_by_year\n";
        for (const UnitSimulation& unit : result.units) {
            for (int year = result.first_year; year <= result.last_year; ++year) {
                prob << unit.name << ',' << year << ','
                     << format_value(prob_peak_by_year(unit.samples, year)) << '\n';
            }
        }
        write_text_file(out_dir / "prob_by_year.csv", prob.str());

        std::ostringstream hist_values;
        hist_values << "unit,bin_index,lower_edge,upper_edge,count\n";
        std::ostringstream hist_years;
        hist_years << "unit,year,count\n";
        for (const UnitSimulation& unit : result.units) {
            const Histogram& hv = unit.distribution.value_histogram;
            for (std::size_t b = 0; b < hv.counts.size(); ++b) {
                hist_values << unit.name << ',' << b << ',' << format_value(hv.edges[b])
                            << ',' << format_value(hv.edges[b + 1]) << ',' << hv.counts[b]
                            << '\n';
            }
            const Histogram& hy = unit.distribution.year_histogram;
            for (std::size_t b = 0; b < hy.counts.size(); ++b) {
                hist_years << unit.name << ','
                           << static_cast<int>(std::lround(hy.edges[b])) << ','
                           << hy.counts[b] << '\n';
            }
        }
        write_text_file(out_dir / "histogram_values.csv", hist_values.str());
        write_text_file(out_dir / "histogram_years.csv", hist_years.str());

        if (!bands.empty()) {
            std::ostringstream out;
            out << "unit,year,static";
            for (int k : bands.front().second.k_levels) {
                out << ",band_" << k;
            }
            out << '\n';
            for (const auto& [unit, band] : bands) {
                for (std::size_t i = 0; i < band.static_values.size(); ++i) {
                    out << unit << ',' << (band.start_year + static_cast<int>(i)) << ','
                        << format_value(band.static_values[i]);
                    for (const auto& level : band.band_values) {
                        out << ',' << format_value(level[i]);
                    }
                    out << '\n';
                }
            }
            write_text_file(out_dir / "bands.csv", out.str());
        }

        if (!result.kept.empty()) {
            std::ostringstream out;
            out << "unit,draw_index,year,value\n";
            for (const KeptTrajectory& kept : result.kept) {
                for (std::size_t i = 0; i < kept.trajectory.values.size(); ++i) {
                    out << kept.unit << ',' << kept.draw_index << ','
                        << kept.trajectory.year_at(i) << ','
                        << format_value(kept.trajectory.values[i]) << '\n';
                }
            }
            write_text_file(out_dir / "draws_sample.csv", out.str());
        }
    }

    if (wants_structured(format)) {
        ordered_json root;
        root["schema_version"] = kSchemaVersion;
        root["scenario"] = result.scenario;
        root["scope"] = result.scope == SimScope::National ? "national" : "province";
        root["quantity"] = result.quantity == SimQuantity::Emissions ? "emissions" : "energy";
        root["mode"] = to_string(result.mode);
        root["draws"] = result.draws;
        root["seed"] = result.seed;
        root["first_year"] = result.first_year;
        root["last_year"] = result.last_year;
        root["redraws"] = result.redraws;

        ordered_json units = ordered_json::array();
        for (const UnitSimulation& unit : result.units) {
            const PeakDistribution& d = unit.distribution;
            ordered_json j;
            j["name"] = unit.name;
            j["mean_value"] = round_sig6(d.mean_value);
            j["sd_value"] = round_sig6(d.sd_value);
            j["mean_year"] = round_sig6(d.mean_year);
            j["sd_year"] = round_sig6(d.sd_year);
            ordered_json vp;
            ordered_json yp;
            for (std::size_t i = 0; i < kPercentileLevels.size(); ++i) {
                vp[kPercentileNames[i]] = round_sig6(d.value_percentiles[i]);
                yp[kPercentileNames[i]] = d.year_percentiles[i];
            }
            j["value_percentiles"] = std::move(vp);
            j["year_percentiles"] = std::move(yp);
            j["value_histogram"] = histogram_to_json(d.value_histogram);
            j["year_histogram"] = histogram_to_json(d.year_histogram);

            ordered_json prob = ordered_json::array();
            for (int year = result.first_year; year <= result.last_year; ++year) {
                ordered_json row;
                row["year"] = year;
                row["prob"] = round_sig6(prob_peak_by_year(unit.samples, year));
                prob.push_back(std::move(row));
            }
            j["prob_peak_by_year"] = std::move(prob);
            units.push_back(std::move(j));
        }
        root["units"] = std::move(units);

        if (!bands.empty()) {
            ordered_json all = ordered_json::array();
            for (const auto& [unit, band] : bands) {
                ordered_json j;
                j["unit"] = unit;
                j["start_year"] = band.start_year;
                ordered_json k_levels = ordered_json::array();
                for (int k : band.k_levels) {
                    k_levels.push_back(k);
                }
                ordered_json mass = ordered_json::array();
                for (double m : band.one_sided_mass) {
                    mass.push_back(round_sig6(m));
                }
                ordered_json statics = ordered_json::array();
                for (double v : band.static_values) {
                    statics.push_back(round_sig6(v));
                }
                ordered_json levels = ordered_json::array();
                for (const auto& level : band.band_values) {
                    ordered_json values = ordered_json::array();
                    for (double v : level) {
                        values.push_back(round_sig6(v));
                    }
                    levels.push_back(std::move(values));
                }
                j["k_levels"] = std::move(k_levels);
                j["one_sided_mass"] = std::move(mass);
                j["static"] = std::move(statics);
                j["bands"] = std::move(levels);
                all.push_back(std::move(j));
            }
            root["uncertainty_bands"] = std::move(all);
        }

        write_text_file(out_dir / "simulation_summary.json", root.dump(2) + "\n");
    }
}

// --- allocation reports --------------------------------------------------

void write_allocation_reports(const AllocationScheme& scheme, ReportFormat format,
                              const std::filesystem::path& out_dir)
{
    ensure_out_dir(out_dir);

    if (wants_tabular(format)) {
        std::ostringstream out;
        out << "province,reduction_mtco2\n";
        for (const ProvinceReduction& r : scheme.reductions) {
            out << r.province << ',' << format_value(r.reduction) << '\n';
        }
        write_text_file(out_dir / "allocation.csv", out.str());

        std::ostringstream rollup;
        rollup << "region,total_mtco2,mean_mtco2,provinces\n";
        for (const RegionRollup& r : scheme.regions) {
            rollup << r.region << ',' << format_value(r.total) << ','
                   << format_value(r.mean) << ',' << r.province_count << '\n';
        }
        write_text_file(out_dir / "regional_rollup.csv", rollup.str());
    }

    if (wants_structured(format)) {
        ordered_json root;
        root["schema_version"] = kSchemaVersion;
        root["strategy"] = to_string(scheme.strategy);
        root["basis"] = to_string(scheme.basis);
        if (scheme.national_target) {
            root["national_target"] = round_sig6(*scheme.national_target);
        } else {
            root["national_target"] = nullptr;
        }
        ordered_json reductions = ordered_json::array();
        for (const ProvinceReduction& r : scheme.reductions) {
            ordered_json j;
            j["province"] = r.province;
            j["reduction_mtco2"] = round_sig6(r.reduction);
            reductions.push_back(std::move(j));
        }
        root["reductions"] = std::move(reductions);
        ordered_json regions = ordered_json::array();
        for (const RegionRollup& r : scheme.regions) {
            ordered_json j;
            j["region"] = r.region;
            j["total_mtco2"] = round_sig6(r.total);
            j["mean_mtco2"] = round_sig6(r.mean);
            j["provinces"] = r.province_count;
            regions.push_back(std::move(j));
        }
        root["regions"] = std::move(regions);
        write_text_file(out_dir / "allocation.json", root.dump(2) + "\n");
    }
}

// --- manifest ------------------------------------------------------------

void write_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir)
{
    ensure_out_dir(out_dir);
    ordered_json root;
    root["schema_version"] = kSchemaVersion;
    root["engine_version"] = manifest.engine_version;
    root["command"] = manifest.command;
    root["bundle"] = manifest.bundle_path;
    ordered_json scenarios = ordered_json::array();
    for (const std::string& name : manifest.scenarios) {
        scenarios.push_back(name);
    }
    root["scenarios"] = std::move(scenarios);
    if (manifest.seed) {
        root["seed"] = *manifest.seed;
    }
    if (manifest.draws) {
        root["draws"] = *manifest.draws;
    }
    if (manifest.workers) {
        root["workers"] = *manifest.workers;
    }
    for (const auto& [key, value] : manifest.options) {
        root[key] = value;
    }
    root["out_dir"] = manifest.out_dir;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", manifest.duration_seconds);
    root["duration_seconds"] = std::strtod(buf, nullptr);
    write_text_file(out_dir / "manifest.json", root.dump(2) + "\n");
}

// --- pipeline readers ----------------------------------------------------

StaticPeaksDoc read_static_peaks(const std::filesystem::path& path)
{
    const std::filesystem::path file = resolve_doc_path(path, "static_projection.json");
    const std::string text = read_text_file(file);
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw IoError(file.string() + ": not a valid projection document");
    }
    StaticPeaksDoc doc;
    try {
        doc.scenario = root.at("scenario").get<std::string>();
        for (const auto& p : root.at("provinces")) {
            const std::string name = p.at("name").get<std::string>();
            doc.emission_peaks[name] = peak_from_json(p.at("emission_peak"), name);
            doc.energy_peaks[name] = peak_from_json(p.at("energy_peak"), name);
        }
        const auto& national = root.at("national");
        doc.emission_peaks["national"] = peak_from_json(national.at("emission_peak"), "national");
        doc.energy_peaks["national"] = peak_from_json(national.at("energy_peak"), "national");
    } catch (const json::exception& err) {
        throw IoError(file.string() + ": " + err.what());
    }
    return doc;
}

SimulationSummaryDoc read_simulation_summary(const std::filesystem::path& path)
{
    const std::filesystem::path file = resolve_doc_path(path, "simulation_summary.json");
    const std::string text = read_text_file(file);
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw IoError(file.string() + ": not a valid simulation summary");
    }
    SimulationSummaryDoc doc;
    try {
        doc.scenario = root.at("scenario").get<std::string>();
        const std::string scope = root.at("scope").get<std::string>();
        doc.scope = scope == "province" ? SimScope::Province : SimScope::National;
        const std::string quantity = root.at("quantity").get<std::string>();
        doc.quantity = quantity == "energy" ? SimQuantity::Energy : SimQuantity::Emissions;
        for (const auto& unit : root.at("units")) {
            const std::string name = unit.at("name").get<std::string>();
            PeakDistribution d;
            d.draws = root.at("draws").get<std::size_t>();
            d.mean_value = unit.at("mean_value").get<double>();
            d.sd_value = unit.at("sd_value").get<double>();
            d.mean_year = unit.at("mean_year").get<double>();
            d.sd_year = unit.at("sd_year").get<double>();
            const auto& vp = unit.at("value_percentiles");
            const auto& yp = unit.at("year_percentiles");
            for (std::size_t i = 0; i < kPercentileLevels.size(); ++i) {
                d.value_percentiles[i] = vp.at(kPercentileNames[i]).get<double>();
                d.year_percentiles[i] = yp.at(kPercentileNames[i]).get<int>();
            }
            d.value_histogram = histogram_from_json(unit.at("value_histogram"),
                                                    name + ".value_histogram");
            d.year_histogram = histogram_from_json(unit.at("year_histogram"),
                                                   name + ".year_histogram");
            doc.distributions.emplace(name, std::move(d));
        }
    } catch (const json::exception& err) {
        throw IoError(file.string() + ": " + err.what());
    }
    return doc;
}

} // namespace kayasim

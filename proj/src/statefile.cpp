#include "ferdisc/statefile.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ferdisc/errors.hpp"

namespace ferdisc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw ValidationError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& source, int line, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        fail(source, line, "cannot parse number '" + t + "'");
    return value;
}

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace

const FockVector& StateFile::by_name(const std::string& name) const {
    for (const auto& ns : states)
        if (ns.name == name) return ns.state;
    throw ValidationError("state file has no state named '" + name + "'");
}

StateFile parse_state_file(std::istream& in, const std::string& source_name) {
    bool have_partition = false;
    ModePartition partition;
    std::vector<std::pair<std::string, std::map<std::string, cplx>>> sections;
    std::string line;
    int line_no = 0;

    auto current_terms = [&]() -> std::map<std::string, cplx>& {
        if (sections.empty()) sections.push_back({"state", {}});
        return sections.back().second;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;

        const auto colon = body.find(':');
        if (colon == std::string::npos) fail(source_name, line_no, "expected '<key>: <value>'");
        const std::string key = trim(body.substr(0, colon));
        const std::string value = trim(body.substr(colon + 1));

        if (key == "modes") {
            if (have_partition) fail(source_name, line_no, "second 'modes' header");
            const auto plus = value.find('+');
            if (plus == std::string::npos)
                fail(source_name, line_no, "modes header must look like 'modes: 2+2'");
            int na = 0, nb = 0;
            try {
                na = std::stoi(value.substr(0, plus));
                nb = std::stoi(value.substr(plus + 1));
            } catch (const std::exception&) {
                fail(source_name, line_no, "cannot parse mode counts in '" + value + "'");
            }
            try {
                partition = make_partition(na, nb);
            } catch (const ValidationError& e) {
                fail(source_name, line_no, e.what());
            }
            have_partition = true;
        } else if (key == "state") {
            if (value.empty()) fail(source_name, line_no, "state section needs a name");
            sections.push_back({value, {}});
        } else {
            if (!have_partition)
                fail(source_name, line_no, "basis term before the 'modes: <a>+<b>' header");
            if (static_cast<int>(key.size()) != partition.total_modes())
                fail(source_name, line_no, "bitstring '" + key + "' has wrong length, expected " +
                                               std::to_string(partition.total_modes()));
            const auto comma = value.find(',');
            if (comma == std::string::npos)
                fail(source_name, line_no, "amplitude must be '<re>,<im>'");
            const double re = parse_double(source_name, line_no, value.substr(0, comma));
            const double im = parse_double(source_name, line_no, value.substr(comma + 1));
            auto& terms = current_terms();
            if (terms.count(key)) fail(source_name, line_no, "duplicate bitstring '" + key + "'");
            terms[key] = cplx(re, im);
        }
    }

    if (!have_partition) throw ValidationError(source_name + ": missing 'modes: <a>+<b>' header");
    if (sections.empty()) throw ValidationError(source_name + ": file defines no state");

    StateFile file;
    file.partition = partition;
    for (auto& [name, terms] : sections) {
        if (terms.empty()) throw ValidationError(source_name + ": state '" + name + "' has no terms");
        try {
            file.states.push_back({name, make_state(partition, terms, Normalize::No)});
        } catch (const ValidationError& e) {
            throw ValidationError(source_name + ": state '" + name + "': " + e.what());
        }
    }
    return file;
}

StateFile load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open state file '" + path + "'");
    return parse_state_file(in, path);
}

void dump_state_file(std::ostream& out, const StateFile& file) {
    out << "modes: " << file.partition.n_alice << "+" << file.partition.n_bob << "\n";
    for (const auto& ns : file.states) {
        out << "state: " << ns.name << "\n";
        for (std::size_t idx = 0; idx < ns.state.amplitudes.size(); ++idx) {
            const cplx a = ns.state.amplitudes[idx];
            if (a == cplx{}) continue;
            out << bitstring_of(idx, file.partition.total_modes()) << ": " << format_double(a.real())
                << "," << format_double(a.imag()) << "\n";
        }
    }
}

void save_state_file(const std::string& path, const StateFile& file) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    dump_state_file(out, file);
}

} // namespace ferdisc

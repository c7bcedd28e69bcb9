#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ferdisc/fock.hpp"

namespace ferdisc {

/// State file grammar (UTF-8 text, one item per line):
///   modes: <n_alice>+<n_bob>       header, required once before any term
///   state: <name>                  starts a named section; optional for a
///                                  single-state file
///   <bitstring>: <re>,<im>         one basis term, e.g. "0101: 0.5,-0.25"
///   # ...                          comment; blank lines are ignored
struct NamedState {
    std::string name;
    FockVector state;
};

struct StateFile {
    ModePartition partition;
    std::vector<NamedState> states;

    const FockVector& by_name(const std::string& name) const;
};

StateFile parse_state_file(std::istream& in, const std::string& source_name = "<stream>");
StateFile load_state_file(const std::string& path);

/// Canonical text form; a dump re-parses to bit-identical amplitudes.
void dump_state_file(std::ostream& out, const StateFile& file);
void save_state_file(const std::string& path, const StateFile& file);

} // namespace ferdisc

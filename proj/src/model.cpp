#include "aoi/model.hpp"

#include "aoi/errors.hpp"

namespace aoi {

const char* discipline_name(Discipline d) {
    switch (d) {
        case Discipline::FCFS: return "fcfs";
        case Discipline::PLCFS: return "p-lcfs";
        case Discipline::NPLCFSDiscard: return "np-lcfs-discard";
        case Discipline::NPLCFSKeep: return "np-lcfs-keep";
    }
    return "?";
}

Discipline discipline_from_name(const std::string& name) {
    if (name == "fcfs") return Discipline::FCFS;
    if (name == "p-lcfs") return Discipline::PLCFS;
    if (name == "np-lcfs-discard") return Discipline::NPLCFSDiscard;
    if (name == "np-lcfs-keep") return Discipline::NPLCFSKeep;
    throw InvalidConfig("unknown discipline '" + name + "'");
}

void reject_dd(const DistSpec& g, const DistSpec& h) {
    if (g.is_deterministic() && h.is_deterministic())
        throw InvalidParameter("deterministic arrivals with deterministic service are not supported");
}

bool needs_stability(Discipline d) {
    return d == Discipline::FCFS || d == Discipline::NPLCFSKeep;
}

}  // namespace aoi

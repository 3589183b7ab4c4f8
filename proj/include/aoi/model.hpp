#pragma once

#include <string>

#include "aoi/distributions.hpp"

namespace aoi {

enum class Discipline { FCFS, PLCFS, NPLCFSDiscard, NPLCFSKeep };

const char* discipline_name(Discipline d);
Discipline discipline_from_name(const std::string& name);  // throws InvalidConfig

struct Model {
    DistSpec arrival;  // interarrival time G
    DistSpec service;  // service time H
    Discipline discipline = Discipline::FCFS;

    double lambda() const { return 1.0 / mean(arrival); }
    double rho() const { return mean(service) / mean(arrival); }
};

// D/D/1 is outside every result; throws InvalidParameter.
void reject_dd(const DistSpec& g, const DistSpec& h);

// Disciplines whose stationary AoI needs rho < 1.
bool needs_stability(Discipline d);

}  // namespace aoi

#include "aoi/analyze.hpp"

#include "aoi/errors.hpp"
#include "aoi/fcfs.hpp"
#include "aoi/lcfs.hpp"

namespace aoi {

AoiAnalytic analyze(const Model& m) {
    reject_dd(m.arrival, m.service);
    const bool poisson = m.arrival.is_exponential();
    const bool exp_service = m.service.is_exponential();
    const double lambda = m.lambda();
    const double mu = 1.0 / mean(m.service);
    switch (m.discipline) {
        case Discipline::FCFS:
            if (poisson) return fcfs_mg1(m.service, lambda);
            if (exp_service) return fcfs_gm1(m.arrival, mu);
            break;
        case Discipline::PLCFS:
            if (poisson) return plcfs_mg1(m.service, lambda);
            if (exp_service) return plcfs_gm1(m.arrival, mu);
            return plcfs_gigi1(m.arrival, m.service);
        case Discipline::NPLCFSDiscard:
            if (poisson) return nplcfs_mg1_discard(m.service, lambda);
            if (exp_service) return nplcfs_gm1_discard(m.arrival, mu);
            break;
        case Discipline::NPLCFSKeep:
            if (poisson) return nplcfs_mg1_keep(m.service, lambda);
            if (exp_service) return nplcfs_gm1_keep(m.arrival, mu);
            break;
    }
    throw Unsupported(std::string("no closed form for ") + discipline_name(m.discipline) +
                      " with " + describe(m.arrival) + " arrivals and " + describe(m.service) +
                      " service");
}

}  // namespace aoi

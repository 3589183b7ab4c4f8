#include <cmath>
#include <functional>
#include <sstream>

#include "aoi/errors.hpp"
#include "aoi/experiment.hpp"
#include "aoi/fcfs.hpp"
#include "aoi/lcfs.hpp"

namespace aoi {

namespace {

struct Figure {
    CsvTable& table;
    std::string id;

    void point(const std::string& series, const char* x_name, double x, const char* y_name,
               const std::function<double()>& y) {
        std::string status = "ok";
        double v = NAN;
        try {
            v = y();
            if (std::isinf(v)) status = "infinite";
            else if (!std::isfinite(v)) status = "non_finite";
        } catch (const Unstable&) {
            status = "unstable";
        } catch (const DegenerateRace&) {
            status = "degenerate";
        }
        table.add({id, series, x_name, fmt(x), y_name, fmt(v), status});
    }
};

// a, a + step, ... up to b inclusive, without accumulated drift.
std::vector<double> steps(double a, double b, double step) {
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double x = a + k * step;
        if (x > b + 1e-9 * step) break;
        out.push_back(x);
    }
    return out;
}

std::string cv_label(double cv) { return "cv=" + fmt(cv); }

void fig3(Figure f) {
    for (double rho : steps(0.01, 0.99, 0.01)) {
        const AoiAnalytic a = fcfs_gm1(DistSpec::deterministic(1.0 / rho), 1.0);
        f.point("mean", "rho", rho, "E[A]", [&] { return a.mean; });
        f.point("sd", "rho", rho, "SD[A]", [&] { return *a.sd(); });
        f.point("mean_vs_sd", "E[A]", a.mean, "SD[A]", [&] { return *a.sd(); });
    }
    const OptimalRho opt = fcfs_dm1_optimal_rho();
    f.point("argmin_mean", "rho", opt.mean, "E[A]",
            [&] { return fcfs_gm1(DistSpec::deterministic(1.0 / opt.mean), 1.0).mean; });
    f.point("argmin_sd", "rho", opt.sd, "SD[A]",
            [&] { return *fcfs_gm1(DistSpec::deterministic(1.0 / opt.sd), 1.0).sd(); });
}

void fig4(Figure f) {
    for (double cv : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const DistSpec h = from_mean_cv(1.0, cv);
        for (double rho : steps(0.05, 5.0, 0.05))
            f.point(cv_label(cv), "rho", rho, "E[A]", [&] { return plcfs_mg1(h, rho).mean; });
    }
}

void fig5(Figure f, std::initializer_list<double> cvs) {
    for (double cv : cvs) {
        const DistSpec h = from_mean_cv(1.0, cv);
        for (double rho : steps(0.05, 5.0, 0.05))
            f.point(cv_label(cv), "rho", rho, "E[A]",
                    [&] { return plcfs_gigi1(DistSpec::deterministic(1.0 / rho), h).mean; });
    }
}

void fig6(Figure f) {
    const DistSpec m = DistSpec::exponential(1.0);
    const DistSpec d = DistSpec::deterministic(1.0);
    for (double rho : steps(0.02, 0.98, 0.02)) {
        const DistSpec dg = DistSpec::deterministic(1.0 / rho);
        f.point("M/M/1 discard", "rho", rho, "E[A]", [&] { return nplcfs_mg1_discard(m, rho).mean; });
        f.point("M/M/1 keep", "rho", rho, "E[A]", [&] { return nplcfs_mg1_keep(m, rho).mean; });
        f.point("D/M/1 discard", "rho", rho, "E[A]", [&] { return nplcfs_gm1_discard(dg, 1.0).mean; });
        f.point("D/M/1 keep", "rho", rho, "E[A]", [&] { return nplcfs_gm1_keep(dg, 1.0).mean; });
        f.point("M/D/1 discard", "rho", rho, "E[A]", [&] { return nplcfs_mg1_discard(d, rho).mean; });
        f.point("M/D/1 keep", "rho", rho, "E[A]", [&] { return nplcfs_mg1_keep(d, rho).mean; });
    }
}

void fig_mg1(Figure f, const DistSpec& h) {
    for (double rho : steps(0.02, 0.98, 0.02)) {
        f.point("fcfs", "rho", rho, "E[A]", [&] { return fcfs_mg1(h, rho).mean; });
        f.point("p-lcfs", "rho", rho, "E[A]", [&] { return plcfs_mg1(h, rho).mean; });
        f.point("np-lcfs-discard", "rho", rho, "E[A]", [&] { return nplcfs_mg1_discard(h, rho).mean; });
        f.point("np-lcfs-keep", "rho", rho, "E[A]", [&] { return nplcfs_mg1_keep(h, rho).mean; });
    }
}

void fig9(Figure f) {
    const double top = 2.0 - std::sqrt(2.0);
    for (double rho : steps(0.005, top, 0.005)) {
        if (rho >= top) break;
        f.point("v", "rho", rho, "Cv[H]^2", [&] { return v_rho(rho); });
    }
}

void emit(CsvTable& t, const std::string& id) {
    Figure f{t, id};
    if (id == "3") return fig3(f);
    if (id == "4") return fig4(f);
    if (id == "5a") return fig5(f, {1.0, 1.5, 2.0, 3.0});
    if (id == "5b") return fig5(f, {0.25, 0.5, 0.75, 1.0});
    if (id == "6") return fig6(f);
    if (id == "7") return fig_mg1(f, DistSpec::exponential(1.0));
    if (id == "8") {
        fig_mg1(f, DistSpec::deterministic(1.0));
        const double r = rho_hat_star();
        f.point("rho_hat_star", "rho", r, "E[A]", [&] { return plcfs_mg1(DistSpec::deterministic(1.0), r).mean; });
        return;
    }
    if (id == "9") return fig9(f);
    throw UnknownFigure("unknown figure \"" + id + "\"; expected one of 3, 4, 5a, 5b, 6, 7, 8, 9, all");
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"3", "4", "5a", "5b", "6", "7", "8", "9"};
    return ids;
}

RunResult run_reproduce(const std::string& figure) {
    RunResult r;
    r.table = CsvTable({"figure", "series", "x_name", "x", "y_name", "y", "status"});
    if (figure == "all")
        for (const auto& id : figure_ids()) emit(r.table, id);
    else
        emit(r.table, figure);
    std::ostringstream os;
    os << "reproduce " << figure << ": " << r.table.rows().size() << " row(s)";
    r.summary = os.str();
    return r;
}

}  // namespace aoi

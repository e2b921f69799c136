#ifndef BANDEDGE_CSV_IO_HPP
#define BANDEDGE_CSV_IO_HPP

#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "bandedge/propagation.hpp"
#include "bandedge/spectra.hpp"
#include "bandedge/volterra.hpp"

namespace bandedge {

// CSV writers with locale-independent full-precision formatting
// (17 significant digits, enough to round-trip binary64 exactly), so two
// runs with the same configuration produce byte-identical files.

inline std::string format_full(double v) {
    char buf[48];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

inline void write_spectrum_csv(std::ostream& os, const SpectrumTable& table) {
    os << "delta,re_chi,im_chi,absorption\n";
    for (const auto& s : table.samples)
        os << format_full(s.delta) << ',' << format_full(s.chi.real()) << ','
           << format_full(s.chi.imag()) << ',' << format_full(s.absorption())
           << '\n';
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,re_a0,im_a0,re_a1,im_a1\n";
    for (std::size_t i = 0; i < tr.size(); ++i)
        os << format_full(tr.time(i)) << ',' << format_full(tr.a0[i].real())
           << ',' << format_full(tr.a0[i].imag()) << ','
           << format_full(tr.a1[i].real()) << ',' << format_full(tr.a1[i].imag())
           << '\n';
}

inline void write_pulse_csv(std::ostream& os, const PulseField& p) {
    os << "t,re_E,im_E,abs_E\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        os << format_full(p.time(i)) << ',' << format_full(p.envelope[i].real())
           << ',' << format_full(p.envelope[i].imag()) << ','
           << format_full(std::abs(p.envelope[i])) << '\n';
}

inline void write_dos_csv(std::ostream& os, const ReservoirModel& m,
                          const DeltaGrid& grid) {
    os << "x,rho\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.at(i);
        os << format_full(x) << ',' << format_full(density_of_modes(m, x))
           << '\n';
    }
}

namespace detail {

inline double parse_field(const std::string& field, const char* what) {
    double v = 0.0;
    const char* b = field.data();
    const char* e = b + field.size();
    while (b < e && *b == ' ') ++b;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc())
        throw std::runtime_error(std::string("csv: cannot parse ") + what +
                                 " from '" + field + "'");
    return v;
}

}  // namespace detail

/// Reads a pulse written by write_pulse_csv (abs_E column is ignored; the
/// re/im fields reproduce the envelope bit for bit). The carrier detuning is
/// not part of the file format and must be supplied by the caller.
inline PulseField read_pulse_csv(std::istream& is, double carrier_delta) {
    PulseField p;
    p.carrier_delta = carrier_delta;
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,re_E,im_E", 0) != 0)
        throw std::runtime_error("csv: missing pulse header 't,re_E,im_E,abs_E'");
    std::vector<double> times;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f0, f1, f2;
        if (!std::getline(ss, f0, ',') || !std::getline(ss, f1, ',') ||
            !std::getline(ss, f2, ','))
            throw std::runtime_error("csv: malformed pulse row: " + line);
        times.push_back(detail::parse_field(f0, "t"));
        p.envelope.emplace_back(detail::parse_field(f1, "re_E"),
                                detail::parse_field(f2, "im_E"));
    }
    if (times.size() < 2) throw std::runtime_error("csv: pulse too short");
    p.t0 = times.front();
    p.dt = times[1] - times[0];
    p.validate();
    return p;
}

inline void write_file(const std::string& path,
                       const std::function<void(std::ostream&)>& writer) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
    writer(os);
    os.flush();
    if (!os) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace bandedge

#endif

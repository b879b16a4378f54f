#include "ringlight/bloch.hpp"
#include "ringlight/coupling.hpp"
#include "ringlight/dynamics.hpp"
#include "ringlight/errors.hpp"
#include "ringlight/geometry.hpp"
#include "ringlight/hamiltonian.hpp"
#include "ringlight/runner.hpp"
#include "ringlight/spectrum.hpp"
#include "ringlight/steadystate.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ringlight;

namespace {

EffectiveHamiltonian hamiltonian_for(const EmitterEnsemble& ens, double detuning, double trap_rate) {
    return retune(assemble_effective(ens, coupling_matrices(ens)), ens, detuning, trap_rate);
}

RMatrix positions(const EmitterEnsemble& ens) {
    RMatrix out(static_cast<Eigen::Index>(ens.size()), 3);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = ens[i].position.transpose();
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Collective dipole-dipole physics of quantum emitter ring lattices";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<GeometrySpec>(m, "GeometrySpec")
        .def(py::init<>())
        .def_property(
            "kind", [](const GeometrySpec& g) { return std::string(to_string(g.kind)); },
            [](GeometrySpec& g, const std::string& k) { g.kind = parse_geometry_kind(k); })
        .def_readwrite("ring_size", &GeometrySpec::ring_size)
        .def_readwrite("rings_x", &GeometrySpec::rings_x)
        .def_readwrite("rings_y", &GeometrySpec::rings_y)
        .def_readwrite("sites_x", &GeometrySpec::sites_x)
        .def_readwrite("sites_y", &GeometrySpec::sites_y)
        .def_readwrite("spacing", &GeometrySpec::spacing)
        .def_readwrite("ring_gap", &GeometrySpec::ring_gap)
        .def_readwrite("rotation", &GeometrySpec::rotation)
        .def_readwrite("ring_rotations", &GeometrySpec::ring_rotations)
        .def_readwrite("donor_acceptor", &GeometrySpec::with_donor_acceptor)
        .def_readwrite("center_donor", &GeometrySpec::center_donor)
        .def_readwrite("donor_acceptor_distance", &GeometrySpec::donor_acceptor_distance)
        .def_readwrite("pair_separation", &GeometrySpec::pair_separation)
        .def_readwrite("detuning", &GeometrySpec::detuning)
        .def_readwrite("trap_rate", &GeometrySpec::trap_rate);

    py::class_<EmitterEnsemble>(m, "EmitterEnsemble")
        .def("__len__", &EmitterEnsemble::size)
        .def_property_readonly("positions", &positions)
        .def_property_readonly("roles",
                               [](const EmitterEnsemble& e) {
                                   std::vector<std::string> r;
                                   for (const auto& x : e.emitters()) {
                                       r.emplace_back(to_string(x.role));
                                   }
                                   return r;
                               })
        .def_property_readonly("detunings",
                               [](const EmitterEnsemble& e) {
                                   std::vector<double> r;
                                   for (const auto& x : e.emitters()) {
                                       r.push_back(x.detuning);
                                   }
                                   return r;
                               })
        .def_property_readonly("donor_index", &EmitterEnsemble::donor_index)
        .def_property_readonly("acceptor_index", &EmitterEnsemble::acceptor_index)
        .def_property_readonly("ring_count", &EmitterEnsemble::ring_count)
        .def_property_readonly("radius", [](const EmitterEnsemble& e) { return e.metadata().radius; })
        .def_property_readonly("ring_pitch", [](const EmitterEnsemble& e) { return e.metadata().ring_pitch; })
        .def("lattice_only", &EmitterEnsemble::lattice_only);

    m.def("build_geometry", &build_geometry, py::arg("spec"));
    m.def("build_ring", &build_ring, py::arg("ring_size"), py::arg("spacing"),
          py::arg("center") = Vec3::Zero().eval(), py::arg("rotation") = 0.0);
    m.def("ring_radius", &ring_radius, py::arg("ring_size"), py::arg("spacing"));
    m.def("apply_rotational_disorder", &apply_rotational_disorder, py::arg("ensemble"), py::arg("seed"));
    m.def("apply_frequency_disorder", &apply_frequency_disorder, py::arg("ensemble"), py::arg("sigma"),
          py::arg("seed"));

    m.def(
        "coupling_matrices",
        [](const EmitterEnsemble& e) {
            const CouplingMatrices c = coupling_matrices(e);
            return py::make_tuple(c.coherent, c.dissipative);
        },
        py::arg("ensemble"), "(J, Gamma) coherent and dissipative coupling matrices");
    m.def(
        "pair_coupling",
        [](double distance) {
            const cplx g = green_projected(Vec3(distance, 0, 0), circular_polarization(), circular_polarization());
            return py::make_tuple(coherent_coupling(g), dissipative_coupling(g));
        },
        py::arg("distance"), "(J, Gamma) between two circularly polarized emitters in the plane");

    m.def(
        "effective_hamiltonian",
        [](const EmitterEnsemble& e, double detuning, double trap_rate) {
            return CMatrix(hamiltonian_for(e, detuning, trap_rate).matrix);
        },
        py::arg("ensemble"), py::arg("detuning") = 0.0, py::arg("trap_rate") = 0.0);

    m.def(
        "transport_efficiency",
        [](const EmitterEnsemble& e, double detuning, double trap_rate, double t) {
            return transport_efficiency(hamiltonian_for(e, detuning, trap_rate), t);
        },
        py::arg("ensemble"), py::arg("detuning"), py::arg("trap_rate"), py::arg("t") = 150.0);

    m.def(
        "evolve",
        [](const EmitterEnsemble& e, double detuning, double trap_rate, double t_max, int steps) {
            const EffectiveHamiltonian h = hamiltonian_for(e, detuning, trap_rate);
            if (!e.donor_index()) {
                throw InvalidArgument("evolve: ensemble has no donor");
            }
            const TransportTrace tr = evolve(h, localized_state(h.size(), static_cast<Eigen::Index>(*e.donor_index())),
                                             time_grid(t_max, steps));
            py::dict d;
            d["t"] = tr.times;
            d["donor_pop"] = tr.donor_pop;
            d["acceptor_pop"] = tr.acceptor_pop;
            d["norm2"] = tr.norm2;
            d["eta"] = tr.eta;
            d["radiated"] = tr.radiated;
            return d;
        },
        py::arg("ensemble"), py::arg("detuning"), py::arg("trap_rate"), py::arg("t_max") = 150.0,
        py::arg("steps") = 300);

    m.def(
        "eigenvalues",
        [](const EmitterEnsemble& e, double detuning, double trap_rate) {
            return CVector(diagonalize(hamiltonian_for(e, detuning, trap_rate)).eigenvalues);
        },
        py::arg("ensemble"), py::arg("detuning") = 0.0, py::arg("trap_rate") = 0.0,
        "eigenvalues sorted by real part");

    m.def(
        "spin_wave_spectrum",
        [](const EmitterEnsemble& ring) {
            py::list out;
            for (const auto& s : spin_wave_spectrum(ring)) {
                out.append(py::make_tuple(s.m, s.shift, s.decay));
            }
            return out;
        },
        py::arg("ring"), "[(m, shift, decay)] for a bare ring");

    m.def(
        "ring_center_analytics",
        [](int ring_size, double spacing) {
            GeometrySpec g;
            g.kind = GeometryKind::single_ring;
            g.ring_size = ring_size;
            g.spacing = spacing;
            g.center_donor = true;
            const SingleRingAnalytics a = ring_center_analytics(build_geometry(g));
            py::dict d;
            d["ring_shift"] = a.ring_shift;
            d["ring_decay"] = a.ring_decay;
            d["donor_coupling"] = a.donor_coupling;
            d["donor_decay"] = a.donor_decay;
            d["optimal_detuning"] = a.optimal_detuning;
            d["detuning_estimate"] = a.detuning_estimate;
            d["effective_decay"] = a.effective_decay;
            d["donor_fraction"] = a.donor_fraction;
            return d;
        },
        py::arg("ring_size"), py::arg("spacing"));
    m.def("dicke_center_donor_fraction", &dicke_center_donor_fraction, py::arg("ring_size"));

    m.def(
        "zak_phase",
        [](int ring_size, double spacing, double ring_gap, int nk, int cells) {
            const ZakResult z = zak_phase(BlochChain(ring_size, spacing, ring_gap, cells), nk);
            return py::make_tuple(z.phase, z.min_overlap);
        },
        py::arg("ring_size"), py::arg("spacing"), py::arg("ring_gap"), py::arg("nk") = 128, py::arg("cells") = 50,
        "(phase in [0, 2 pi), smallest neighbour overlap)");

    m.def(
        "group_velocity",
        [](int ring_size, double spacing, double ring_gap, double detuning) {
            const BandCrossing x =
                group_velocity_and_optimal_trap(BlochChain(ring_size, spacing, ring_gap), detuning);
            py::dict d;
            d["velocity"] = x.velocity;
            d["optimal_trap"] = x.optimal_trap;
            d["k"] = x.k;
            d["m_abs"] = x.m_abs;
            d["decay"] = x.decay;
            return d;
        },
        py::arg("ring_size"), py::arg("spacing"), py::arg("ring_gap"), py::arg("detuning") = 0.0);

    m.def("single_emitter_trap_rate", &single_emitter_trap_rate, py::arg("rabi"), py::arg("trap_rate"));
    m.def(
        "steady_state_rate",
        [](const EmitterEnsemble& e, double detuning, double trap_rate, double rabi, double waist) {
            if (!e.donor_index()) {
                throw InvalidArgument("steady_state_rate: ensemble has no donor");
            }
            const DriveVector drive = gaussian_drive(e, rabi, waist, e[*e.donor_index()].position);
            return solve_steady_state(hamiltonian_for(e, detuning, trap_rate), drive).normalized_rate;
        },
        py::arg("ensemble"), py::arg("detuning"), py::arg("trap_rate"), py::arg("rabi") = 1e-3,
        py::arg("waist") = 0.3, "trapping rate normalized by the single-emitter rate");

    m.def(
        "_run_scenario",
        [](const std::string& config, const std::string& output_dir, const std::vector<std::string>& overrides,
           int jobs, bool write_files) {
            RunOptions o;
            o.output_dir = output_dir;
            o.overrides = overrides;
            o.jobs = jobs;
            o.write_files = write_files;
            RunSummary s;
            {
                py::gil_scoped_release release;
                s = run_scenario(json::parse(config), o);
            }
            return py::make_tuple(s.directory, s.summary.dump(), s.files);
        },
        py::arg("config"), py::arg("output_dir") = "", py::arg("overrides") = std::vector<std::string>(),
        py::arg("jobs") = 0, py::arg("write_files") = true);
    m.def("recipe_ids", &recipe_ids);
    m.def("_recipe", [](const std::string& id) { return recipe(id).dump(); }, py::arg("figure"));
    m.def("schema", &schema_text);
}

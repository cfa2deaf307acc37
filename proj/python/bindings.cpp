#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hardrods/dynamics.hpp"
#include "hardrods/measure.hpp"
#include "hardrods/oracle.hpp"

namespace py = pybind11;
using namespace hardrods;

namespace {

PhaseState make_state(std::vector<double> x, std::vector<double> v) {
    if (x.size() != v.size())
        throw std::invalid_argument("positions and velocities must have equal length");
    return PhaseState{std::move(x), std::move(v)};
}

}  // namespace

PYBIND11_MODULE(hardrods, m) {
    m.doc() = "Exact hard-rod dynamics: Weyl-sorting propagator, event-driven "
              "oracle and measure-invariance lab";

    py::register_exception<OrderViolation>(m, "OrderViolation");
    py::register_exception<OverlapViolation>(m, "OverlapViolation");
    py::register_exception<BadDatumError>(m, "BadDatumError");
    py::register_exception<DegenerateLine>(m, "DegenerateLineError");
    py::register_exception<TripleCollision>(m, "TripleCollisionError");
    py::register_exception<EmptyTarget>(m, "EmptyTargetError");
    py::register_exception<RejectionStall>(m, "RejectionStallError");

    py::class_<RodGeometry>(m, "RodGeometry")
        .def(py::init<int, double>(), py::arg("n"), py::arg("radius"))
        .def_property_readonly("n", &RodGeometry::n)
        .def_property_readonly("radius", &RodGeometry::radius)
        .def_property_readonly("diameter", &RodGeometry::diameter)
        .def("__repr__", [](const RodGeometry& g) {
            return "RodGeometry(n=" + std::to_string(g.n()) +
                   ", radius=" + std::to_string(g.radius()) + ")";
        });

    py::class_<PhaseState>(m, "PhaseState")
        .def(py::init(&make_state), py::arg("positions"), py::arg("velocities"))
        .def_readwrite("positions", &PhaseState::positions)
        .def_readwrite("velocities", &PhaseState::velocities);

    py::class_<SortPermutation>(m, "SortPermutation")
        .def_readonly("perm", &SortPermutation::perm)
        .def("inverse", &SortPermutation::inverse)
        .def("apply", &SortPermutation::apply)
        .def("is_identity", &SortPermutation::is_identity);

    py::class_<PairEvent>(m, "PairEvent")
        .def_readonly("time", &PairEvent::time)
        .def_readonly("i", &PairEvent::i)
        .def_readonly("j", &PairEvent::j);

    py::class_<CollisionSchedule>(m, "CollisionSchedule")
        .def_readonly("events", &CollisionSchedule::events);

    py::class_<DatumClass>(m, "DatumClass")
        .def_readonly("good", &DatumClass::good)
        .def_readonly("witness_time", &DatumClass::witness_time)
        .def_readonly("chain", &DatumClass::chain);

    py::class_<CollisionEvent>(m, "CollisionEvent")
        .def_readonly("time", &CollisionEvent::time)
        .def_readonly("pair", &CollisionEvent::pair);

    py::class_<EventLog>(m, "EventLog")
        .def_readonly("events", &EventLog::events)
        .def_readonly("final_state", &EventLog::final_state)
        .def_readonly("horizon", &EventLog::horizon);

    py::class_<PhaseBox>(m, "PhaseBox")
        .def(py::init([](std::vector<std::pair<double, double>> pos,
                         std::vector<std::pair<double, double>> vel) {
                 PhaseBox b;
                 b.position_intervals = std::move(pos);
                 b.velocity_intervals = std::move(vel);
                 return b;
             }),
             py::arg("position_intervals"), py::arg("velocity_intervals"))
        .def_readwrite("position_intervals", &PhaseBox::position_intervals)
        .def_readwrite("velocity_intervals", &PhaseBox::velocity_intervals)
        .def("volume", &PhaseBox::volume);

    py::class_<InvarianceReport>(m, "InvarianceReport")
        .def_readonly("t", &InvarianceReport::t)
        .def_readonly("n_samples", &InvarianceReport::n_samples)
        .def_readonly("seed", &InvarianceReport::seed)
        .def_readonly("bounding_volume", &InvarianceReport::bounding_volume)
        .def_readonly("count_before", &InvarianceReport::count_before)
        .def_readonly("count_after", &InvarianceReport::count_after)
        .def_readonly("rejected_bad", &InvarianceReport::rejected_bad)
        .def_readonly("volume_before", &InvarianceReport::volume_before)
        .def_readonly("stderr_before", &InvarianceReport::stderr_before)
        .def_readonly("volume_after", &InvarianceReport::volume_after)
        .def_readonly("stderr_after", &InvarianceReport::stderr_after)
        .def_readonly("z_score", &InvarianceReport::z_score);

    py::class_<EnsembleParams>(m, "EnsembleParams")
        .def(py::init([](double beta,
                         std::vector<std::pair<double, double>> box) {
                 EnsembleParams p;
                 p.beta = beta;
                 p.position_box = std::move(box);
                 return p;
             }),
             py::arg("beta"), py::arg("position_box"))
        .def_readwrite("beta", &EnsembleParams::beta)
        .def_readwrite("position_box", &EnsembleParams::position_box);

    m.def("to_fundamental", &to_fundamental, py::arg("geom"), py::arg("state"));
    m.def("from_fundamental", &from_fundamental, py::arg("geom"), py::arg("state"));
    m.def("sort_with_permutation", &sort_with_permutation, py::arg("y"));
    m.def("evaluate_position", &evaluate_position, py::arg("geom"),
          py::arg("z0"), py::arg("t"), py::arg("strict") = false);
    m.def("evaluate_velocity", &evaluate_velocity, py::arg("geom"),
          py::arg("z0"), py::arg("t"), py::arg("strict") = false);
    m.def("evaluate_state", &evaluate_state, py::arg("geom"), py::arg("z0"),
          py::arg("t"), py::arg("strict") = false);
    m.def("collision_schedule", &collision_schedule, py::arg("geom"), py::arg("z0"));
    m.def("classify_datum", &classify_datum, py::arg("geom"), py::arg("z0"));
    m.def("canonicalize", &hardrods::canonicalize, py::arg("geom"),
          py::arg("state"));
    m.def("conserved_quantities", &conserved_quantities, py::arg("v"));
    m.def("random_good_datum", &random_good_datum, py::arg("geom"),
          py::arg("seed"), py::arg("position_span") = 10.0,
          py::arg("velocity_span") = 2.0);

    m.def("next_collision", &next_collision, py::arg("geom"), py::arg("state"));
    m.def("simulate_to", &simulate_to, py::arg("geom"), py::arg("z0"),
          py::arg("t_final"));

    m.def("jacobian_unit_check", &jacobian_unit_check, py::arg("g"), py::arg("t"));
    m.def("estimate_pushforward_volume", &estimate_pushforward_volume,
          py::arg("geom"), py::arg("box"), py::arg("t"), py::arg("n_samples"),
          py::arg("seed"), py::call_guard<py::gil_scoped_release>());
    m.def("sample_canonical", &sample_canonical, py::arg("params"),
          py::arg("geom"), py::arg("n"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());
}

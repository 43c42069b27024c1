#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relmetric/boundary_struct.hpp"
#include "relmetric/domain.hpp"

namespace relmetric {

enum class Verdict { UniquelyDetermined, NotUniquelyDetermined, Undetermined };

std::string to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Undetermined;
    std::string rule;  // Thm1.1-I, Cor1.2, Thm4.3, Thm1.2, Cor1.1-1, Cor1.1-2, Thm1.1-II-open
    nlohmann::json evidence;
};

Classification classify(const PlanarDomain& d);

// A map from boundary points of U to boundary points of V.
//
// Per-component form: s_V = offset + orientation * scale * s_U on each listed component pair.
// Components with infinite length need a sampling window in U's parameter.
// When `forward` is set it replaces the offset formula (piecewise constructions);
// `inverse` is then needed for the inverse direction.
// Explicit form: sampled pairs only; lookups outside the samples are not possible.
struct BoundaryCorrespondence {
    struct ComponentMap {
        BoundaryRef u, v;
        int orientation = 1;
        double offset = 0.0;
        double scale = 1.0;
        std::optional<std::array<double, 2>> window;
    };
    std::vector<ComponentMap> components;
    std::vector<std::pair<BoundaryPoint, BoundaryPoint>> pairs;
    std::function<BoundaryPoint(const BoundaryPoint&)> forward;
    std::function<BoundaryPoint(const BoundaryPoint&)> inverse;
    double sample_density = 16.0;  // points per unit arclength

    bool is_explicit() const { return components.empty(); }
};

// Components of the boundary description in a fixed order.
std::vector<BoundaryRef> boundary_refs(const PlanarDomain& d);

BoundaryCorrespondence identity_correspondence(const PlanarDomain& d, double sample_density = 16.0);
// Correspondence induced by a rigid motion that maps U onto V with the same component layout.
BoundaryCorrespondence motion_correspondence(const PlanarDomain& U, const PlanarDomain& V, const RigidMotion2& m,
                                             double sample_density = 16.0);

BoundaryCorrespondence correspondence_from_json(const nlohmann::json& j, const PlanarDomain& U, const PlanarDomain& V);
nlohmann::json correspondence_to_json(const BoundaryCorrespondence& f);

// Throws std::invalid_argument on a component mismatch or a non-bijective component list.
void check_bijective(const PlanarDomain& U, const PlanarDomain& V, const BoundaryCorrespondence& f);

// Deterministic (by seed) source samples with their images.
std::vector<std::pair<BoundaryPoint, BoundaryPoint>> sample_correspondence(const PlanarDomain& U,
                                                                           const PlanarDomain& V,
                                                                           const BoundaryCorrespondence& f,
                                                                           std::uint64_t seed);

struct RigidSearch {
    std::optional<RigidMotion2> motion;
    RigidMotion2 best;
    double residual = 0.0;   // max |Q p - f(p)| over samples for the best candidate
    double hausdorff = 0.0;  // boundary Hausdorff distance after applying the best candidate
    bool degenerate_sample = false;
    int sample_count = 0;
};

struct IsometryReport {
    std::string kind;  // global | local
    double max_defect = 0.0;
    double inverse_defect = 0.0;  // local only: the same check for the inverse map
    double epsilon_used = 0.0;
    int pair_count = 0;
    std::optional<RigidMotion2> rigid_motion;
    double rigid_residual = 0.0;
    std::string note;
};

IsometryReport check_global_isometry(const PlanarDomain& U, const PlanarDomain& V, const BoundaryCorrespondence& f,
                                     int samples, std::uint64_t seed);
IsometryReport check_local_isometry(const PlanarDomain& U, const PlanarDomain& V, const BoundaryCorrespondence& f,
                                    double epsilon, int anchors, std::uint64_t seed);

// 1/20 of the shortest boundary feature (edge or slit piece) length.
double default_local_epsilon(const PlanarDomain& d);

// Largest epsilon of the form eps0 / 2^k (k <= 20) at which the local defect is within tol.
std::optional<double> uniform_local_epsilon(const PlanarDomain& U, const PlanarDomain& V,
                                            const BoundaryCorrespondence& f, double tol, int anchors,
                                            std::uint64_t seed);

// Closed-form orthogonal alignment of point pairs, with and without reflection.
RigidMotion2 fit_rigid(const std::vector<Point2>& from, const std::vector<Point2>& to, bool reflect);

RigidSearch find_rigid_motion(const PlanarDomain& U, const PlanarDomain& V, const BoundaryCorrespondence& f,
                              std::uint64_t seed = 0);

struct WitnessReport {
    bool passed = false;
    bool component_match = false;
    bool IIa = false, IIb = false, IIc = false;
    double IIa_worst_ratio = 0.0;  // symmetric difference / (eps_metric * perimeter)
    double IIc_worst = 0.0;
    int IIb_checked = 0;
    std::vector<std::string> diagnostics;
};

// theta acts on points of dF_U; Q[i] is paired with the i-th U component of decompose_Fu(U).
WitnessReport verify_witness_II(const PlanarDomain& U, const PlanarDomain& V, const std::vector<RigidMotion2>& Q,
                                const std::function<Point2(const Point2&)>& theta);

nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const IsometryReport& r);
nlohmann::json to_json(const RigidMotion2& m);
nlohmann::json to_json(const RigidSearch& r);
nlohmann::json to_json(const WitnessReport& r);

}  // namespace relmetric

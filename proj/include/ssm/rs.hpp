#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssm/graph.hpp"

namespace ssm {

/// Strip colouring of layer sums, parameterised by the dimension m and the
/// white-strip width k (so delta = 6k/m). The number line is cut into groups
/// of width w = 2m/3 + 2k:
///   [0, m/3) red | [m/3, m/3+k) white | [m/3+k, 2m/3+k) blue | [2m/3+k, w) white
/// Valid parameters need 3 | m and k | m/3, which makes w and the pairing shift
/// 2/delta + 1 = m/(3k) + 1 integral.
class ColouringParams {
 public:
  /// Throws std::invalid_argument, naming the nearest valid (m, k), otherwise.
  static ColouringParams make(std::uint32_t m, std::uint32_t k);

  std::uint32_t m() const noexcept { return m_; }
  std::uint32_t k() const noexcept { return k_; }
  double delta() const noexcept { return 6.0 * k_ / m_; }
  std::uint32_t width() const noexcept { return 2 * m_ / 3 + 2 * k_; }
  std::uint32_t shift() const noexcept { return m_ / (3 * k_) + 1; }
  std::uint32_t strip() const noexcept { return m_ / 3; }
  std::uint32_t coordinate_range() const noexcept { return m_ * m_; }
  /// |X| = |Y| = (m^2)^m, or nullopt if it does not fit a vertex id.
  std::optional<Vertex> side_size() const noexcept;
  /// floor((5 delta / 12) * k): largest allowed pairwise family intersection.
  std::uint32_t intersection_threshold() const noexcept { return 5 * k_ * k_ / (2 * m_); }

  friend bool operator==(const ColouringParams&, const ColouringParams&) = default;

 private:
  ColouringParams(std::uint32_t m, std::uint32_t k) : m_(m), k_(k) {}
  std::uint32_t m_ = 3;
  std::uint32_t k_ = 1;
};

enum class Colour : std::uint8_t { Red, White, Blue };

const char* to_string(Colour c) noexcept;

/// Sorted coordinate subset of [m] with |I| = k.
using IndexSet = std::vector<std::uint32_t>;

Colour colour_of_sum(const ColouringParams& params, std::uint64_t layer_sum) noexcept;

/// Colour of the vector `coords` in [m^2]^m under the index set I.
Colour colour_vertex(const ColouringParams& params, std::span<const std::uint32_t> coords,
                     const IndexSet& index);

/// Vertex ids enumerate [m^2]^m in mixed radix, coordinate 0 least significant.
std::vector<std::uint32_t> decode_vertex(const ColouringParams& params, Vertex id);
Vertex encode_vertex(const ColouringParams& params, std::span<const std::uint32_t> coords);

/// The matchings of one index set, as edges (x in X = side A, y in Y = side B).
struct MatchingPair {
  IndexSet index;
  std::vector<Edge> forward;   // M_I : blue x  ->  red y = x - shift * 1_I
  std::vector<Edge> mirrored;  // M_I': blue y  ->  red x = y - shift * 1_I
};

/// Pairs every blue vertex whose coordinates all exceed the shift with the
/// red vertex reached by subtracting the shift on I, on both sides. Edges are
/// emitted in increasing blue-vertex order.
MatchingPair build_matching_pair(const ColouringParams& params, const IndexSet& index);

/// Greedy selection, in lexicographic order, of k-subsets of [m] whose pairwise
/// intersections have size at most `max_intersection`.
std::vector<IndexSet> build_family(const ColouringParams& params, std::uint32_t max_intersection);

enum class PairKind : std::uint8_t {
  SameIndex,  // M_I vs M_I'
  Forward,    // M_I vs M_J
  Mirrored,   // M_I' vs M_J'
  Cross,      // M_I vs M_J' (either order)
};

const char* to_string(PairKind kind) noexcept;

struct PairCheck {
  std::size_t host = 0;   // matching whose vertex set induces
  std::size_t guest = 0;  // matching whose edges were found inside it
  PairKind kind = PairKind::Forward;
  std::uint64_t induced_edges = 0;
};

struct RSCertificate {
  std::uint64_t pairs_checked = 0;
  std::uint64_t shared_edges = 0;        // edges lying in two matchings
  std::vector<PairCheck> violations;     // ordered pairs with induced_edges > 0
  std::uint64_t induced_violations = 0;  // total over all pairs
  std::uint64_t cross_violations = 0;    // the Cross kind only
  std::uint64_t colour_conflicts = 0;    // M_I edges coloured red/blue under some J != I
  bool sizes_mirror = true;              // |M_I'| = |M_I| for every I
  std::vector<std::size_t> invalid_unions;  // family positions where M_I + M_I' is no matching
  std::vector<double> matched_fraction;     // |M_I + M_I'| / N per family position
  double target_fraction = 0.0;             // 1 - 2 delta

  bool ok() const noexcept {
    return shared_edges == 0 && induced_violations == 0 && colour_conflicts == 0 &&
           sizes_mirror && invalid_unions.empty();
  }
};

/// An explicit RS graph: one matching pair per family member. Matching number
/// 2i is M_I and 2i + 1 is M_I' of family member i.
struct RSInstance {
  static constexpr Vertex kDefaultMaxSide = 10000;

  ColouringParams params = ColouringParams::make(3, 1);
  Vertex side = 0;
  std::vector<MatchingPair> pairs;
  std::optional<RSCertificate> certificate;

  std::size_t matching_count() const noexcept { return 2 * pairs.size(); }
  std::span<const Edge> matching(std::size_t id) const;
  BipartiteGraph union_graph() const;
};

/// Throws std::invalid_argument when the family is empty or malformed, or
/// when (m^2)^m exceeds `max_side`.
RSInstance build_rs_instance(const ColouringParams& params, std::vector<IndexSet> family,
                             Vertex max_side = RSInstance::kDefaultMaxSide);
/// Uses build_family with the parameters' intersection threshold.
RSInstance build_rs_instance(const ColouringParams& params,
                             Vertex max_side = RSInstance::kDefaultMaxSide);

/// Brute-force certification: edge-disjointness, the induced property for every
/// ordered pair of matchings, |M_I'| = |M_I|, validity of each M_I + M_I', and
/// an independent colouring-based recount of cross-inducement.
RSCertificate certify_rs(const RSInstance& instance);

/// Plain-text manifest: parameters, family, matching sizes and verdicts.
void write_rs_manifest(std::ostream& out, const RSInstance& instance);

struct ManifestHeader {
  std::uint32_t m = 0;
  std::uint32_t k = 0;
  std::vector<IndexSet> family;
};

/// Throws std::runtime_error on a malformed manifest.
ManifestHeader read_rs_manifest(std::istream& in);

// --- Two-party hard distributions ------------------------------------------

/// Bare RS graph view used to assemble lambda instances.
struct RsGraph {
  Vertex side = 0;
  std::vector<std::vector<Edge>> matchings;
};

struct CommInstance {
  Vertex rs_side = 0;
  bool plus = false;
  std::size_t matchings = 0;        // t of the underlying RS graph
  std::size_t special = 0;          // s
  std::vector<Edge> sampled_special;  // M^_s
  std::vector<Edge> alice;          // E_1, the union of all M^_i
  std::vector<Edge> bob;            // E_2 = M*_X + M*_Y
  Vertex x_pads = 0;                // A-side ids [rs_side, rs_side + x_pads)
  Vertex y_pads = 0;                // B-side ids [rs_side, rs_side + y_pads)
  std::vector<Edge> overlay;        // P (plus only)
  std::vector<Edge> overlay_added;  // P_G = P minus edges already in E_1
  BipartiteGraph graph;             // stream order: P, then E_1 \ P, then E_2

  /// M*_X + M*_Y + M^_s, a matching of the assembled graph.
  std::vector<Edge> witness() const;
};

/// Two-party assembly: each M_i is cut to a uniform random subset of
/// min(sample_size, |M_i|) edges, a special index s is drawn, and pads are
/// attached by index-order perfect matchings to the vertices M_s leaves
/// uncovered. A non-empty `overlay` is placed first in the stream.
CommInstance assemble_lambda(const RsGraph& rs, std::size_t sample_size, std::uint64_t seed,
                             std::span<const Edge> overlay = {});

struct LambdaOptions {
  bool plus = false;
  std::uint64_t seed = 0;
  std::size_t designated_pair = 0;          // family member i of P = M_i + M_i' + F
  std::optional<std::size_t> sample_size;   // default: (1/2 - 2 delta) N, see .cpp
};

/// lambda over all matchings of a certified instance, or lambda+ over all but
/// the designated pair with P overlaid. Throws std::invalid_argument for an
/// uncertified instance or an invalid designated pair.
CommInstance gen_lambda(const RSInstance& instance, const LambdaOptions& options);

/// M_i + M_i' completed by F, an index-order pairing of the uncovered vertices.
std::vector<Edge> perfect_overlay(const RSInstance& instance, std::size_t pair);

}  // namespace ssm

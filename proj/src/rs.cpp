#include "ssm/rs.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ssm/random.hpp"

namespace ssm {

// --- Parameters and colouring -----------------------------------------------

namespace {

bool lattice_point(std::uint32_t m, std::uint32_t k) {
  return m >= 3 && m % 3 == 0 && k >= 1 && (m / 3) % k == 0;
}

}  // namespace

ColouringParams ColouringParams::make(std::uint32_t m, std::uint32_t k) {
  if (lattice_point(m, k)) return {m, k};
  std::uint32_t best_m = 3;
  std::uint32_t best_k = 1;
  std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
  const std::uint32_t lo = m > 12 ? m - 12 : 3;
  for (std::uint32_t mm = lo; mm <= m + 12; ++mm) {
    for (std::uint32_t kk = 1; kk <= mm / 3; ++kk) {
      if (!lattice_point(mm, kk)) continue;
      const std::uint64_t cost = (mm > m ? mm - m : m - mm) + (kk > k ? kk - k : k - kk);
      if (cost < best_cost) {
        best_cost = cost;
        best_m = mm;
        best_k = kk;
      }
    }
  }
  throw std::invalid_argument("(m=" + std::to_string(m) + ", k=" + std::to_string(k) +
                              ") is not a valid colouring: need 3 | m and k | m/3; nearest valid "
                              "is (m=" + std::to_string(best_m) + ", k=" +
                              std::to_string(best_k) + ")");
}

std::optional<Vertex> ColouringParams::side_size() const noexcept {
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    n *= coordinate_range();
    if (n > kNoVertex - 1) return std::nullopt;
  }
  return static_cast<Vertex>(n);
}

const char* to_string(Colour c) noexcept {
  switch (c) {
    case Colour::Red: return "red";
    case Colour::White: return "white";
    case Colour::Blue: return "blue";
  }
  return "?";
}

Colour colour_of_sum(const ColouringParams& params, std::uint64_t layer_sum) noexcept {
  const std::uint64_t r = layer_sum % params.width();
  const std::uint32_t third = params.strip();
  if (r < third) return Colour::Red;
  if (r < third + params.k()) return Colour::White;
  if (r < 2 * third + params.k()) return Colour::Blue;
  return Colour::White;
}

Colour colour_vertex(const ColouringParams& params, std::span<const std::uint32_t> coords,
                     const IndexSet& index) {
  std::uint64_t s = 0;
  for (const std::uint32_t i : index) s += coords[i];
  return colour_of_sum(params, s);
}

std::vector<std::uint32_t> decode_vertex(const ColouringParams& params, Vertex id) {
  std::vector<std::uint32_t> coords(params.m());
  for (auto& c : coords) {
    c = id % params.coordinate_range();
    id /= params.coordinate_range();
  }
  return coords;
}

Vertex encode_vertex(const ColouringParams& params, std::span<const std::uint32_t> coords) {
  std::uint64_t id = 0;
  for (std::size_t i = coords.size(); i-- > 0;) id = id * params.coordinate_range() + coords[i];
  return static_cast<Vertex>(id);
}

// --- Matchings and family ---------------------------------------------------

namespace {

std::string describe(const IndexSet& index) {
  std::string out = "{";
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(index[i]);
  }
  return out + "}";
}

void check_index_set(const ColouringParams& params, const IndexSet& index) {
  if (index.size() != params.k()) {
    throw std::invalid_argument("index set " + describe(index) + " must have " +
                                std::to_string(params.k()) + " elements");
  }
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= params.m() || (i > 0 && index[i - 1] >= index[i])) {
      throw std::invalid_argument("index set " + describe(index) +
                                  " must be strictly increasing within [m]");
    }
  }
}

}  // namespace

MatchingPair build_matching_pair(const ColouringParams& params, const IndexSet& index) {
  check_index_set(params, index);
  const auto side = params.side_size();
  if (!side) throw std::invalid_argument("vertex set too large");

  // Subtracting shift on every coordinate of I lowers the layer sum by
  // shift * k = m/3 + k, which maps the blue strip of a group onto its red strip.
  std::uint64_t offset = 0;
  {
    std::vector<std::uint32_t> unit(params.m(), 0);
    for (const std::uint32_t i : index) unit[i] = params.shift();
    offset = encode_vertex(params, unit);
  }
  MatchingPair out{index, {}, {}};
  for (Vertex v = 0; v < *side; ++v) {
    const auto coords = decode_vertex(params, v);
    const bool eligible = std::all_of(coords.begin(), coords.end(),
                                      [&](std::uint32_t c) { return c > params.shift(); });
    if (!eligible || colour_vertex(params, coords, index) != Colour::Blue) continue;
    const auto red = static_cast<Vertex>(v - offset);
    out.forward.push_back({v, red});
    out.mirrored.push_back({red, v});
  }
  return out;
}

std::vector<IndexSet> build_family(const ColouringParams& params, std::uint32_t max_intersection) {
  const std::uint32_t m = params.m();
  const std::uint32_t k = params.k();
  std::vector<IndexSet> family;
  IndexSet cand(k);
  for (std::uint32_t i = 0; i < k; ++i) cand[i] = i;
  for (;;) {
    const bool fits = std::all_of(family.begin(), family.end(), [&](const IndexSet& chosen) {
      std::vector<std::uint32_t> common;
      std::set_intersection(chosen.begin(), chosen.end(), cand.begin(), cand.end(),
                            std::back_inserter(common));
      return common.size() <= max_intersection;
    });
    if (fits) family.push_back(cand);
    // Next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && cand[pos - 1] == m - k + pos - 1) --pos;
    if (pos == 0) break;
    ++cand[pos - 1];
    for (std::size_t j = pos; j < k; ++j) cand[j] = cand[j - 1] + 1;
  }
  return family;
}

// --- Instance and certification ---------------------------------------------

std::span<const Edge> RSInstance::matching(std::size_t id) const {
  const auto& pair = pairs.at(id / 2);
  return id % 2 == 0 ? std::span<const Edge>(pair.forward) : std::span<const Edge>(pair.mirrored);
}

BipartiteGraph RSInstance::union_graph() const {
  std::vector<Edge> edges;
  for (std::size_t id = 0; id < matching_count(); ++id) {
    const auto m = matching(id);
    edges.insert(edges.end(), m.begin(), m.end());
  }
  return BipartiteGraph(side, side, std::move(edges));
}

RSInstance build_rs_instance(const ColouringParams& params, std::vector<IndexSet> family,
                             Vertex max_side) {
  const auto side = params.side_size();
  if (!side || *side > max_side) {
    throw std::invalid_argument("(m^2)^m vertices per side exceeds the materialisation cap of " +
                                std::to_string(max_side));
  }
  if (family.empty()) throw std::invalid_argument("index family is empty");
  RSInstance out;
  out.params = params;
  out.side = *side;
  for (const auto& index : family) out.pairs.push_back(build_matching_pair(params, index));
  return out;
}

RSInstance build_rs_instance(const ColouringParams& params, Vertex max_side) {
  return build_rs_instance(params, build_family(params, params.intersection_threshold()),
                           max_side);
}

namespace {

PairKind kind_of(std::size_t host, std::size_t guest) {
  if (host / 2 == guest / 2) return PairKind::SameIndex;
  if (host % 2 != guest % 2) return PairKind::Cross;
  return host % 2 == 0 ? PairKind::Forward : PairKind::Mirrored;
}

}  // namespace

const char* to_string(PairKind kind) noexcept {
  switch (kind) {
    case PairKind::SameIndex: return "same-index";
    case PairKind::Forward: return "forward";
    case PairKind::Mirrored: return "mirrored";
    case PairKind::Cross: return "cross";
  }
  return "?";
}

RSCertificate certify_rs(const RSInstance& instance) {
  RSCertificate cert;
  const Vertex n = instance.side;
  const std::size_t count = instance.matching_count();
  cert.target_fraction = 1.0 - 2.0 * instance.params.delta();

  // Union of all matchings with repeated edges counted once.
  std::vector<Edge> distinct;
  {
    std::vector<std::uint64_t> keys;
    for (std::size_t id = 0; id < count; ++id) {
      for (const Edge e : instance.matching(id)) {
        keys.push_back((static_cast<std::uint64_t>(e.a) << 32) | e.b);
      }
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i > 0 && keys[i] == keys[i - 1]) {
        ++cert.shared_edges;
        continue;
      }
      distinct.push_back({static_cast<Vertex>(keys[i] >> 32), static_cast<Vertex>(keys[i])});
    }
  }

  std::vector<std::uint8_t> in_a(n);
  std::vector<std::uint8_t> in_b(n);
  for (std::size_t host = 0; host < count; ++host) {
    std::fill(in_a.begin(), in_a.end(), 0);
    std::fill(in_b.begin(), in_b.end(), 0);
    for (const Edge e : instance.matching(host)) {
      in_a[e.a] = 1;
      in_b[e.b] = 1;
    }
    for (std::size_t guest = 0; guest < count; ++guest) {
      if (guest == host) continue;
      ++cert.pairs_checked;
      std::uint64_t inside = 0;
      for (const Edge e : instance.matching(guest)) {
        if (in_a[e.a] && in_b[e.b]) ++inside;
      }
      if (inside == 0) continue;
      const PairKind kind = kind_of(host, guest);
      cert.violations.push_back({host, guest, kind, inside});
      cert.induced_violations += inside;
      if (kind == PairKind::Cross) cert.cross_violations += inside;
    }
  }

  // Independent route: an M_I edge can only sit inside V(M_J) or V(M_J') if
  // its endpoints are coloured blue and red (in some order) under J.
  const auto& params = instance.params;
  for (const auto& pi : instance.pairs) {
    for (const auto& pj : instance.pairs) {
      if (pi.index == pj.index) continue;
      for (const auto* edges : {&pi.forward, &pi.mirrored}) {
        for (const Edge e : *edges) {
          const Colour ca = colour_vertex(params, decode_vertex(params, e.a), pj.index);
          const Colour cb = colour_vertex(params, decode_vertex(params, e.b), pj.index);
          if ((ca == Colour::Blue && cb == Colour::Red) ||
              (ca == Colour::Red && cb == Colour::Blue)) {
            ++cert.colour_conflicts;
          }
        }
      }
    }
  }

  const BipartiteGraph complete_host(n, n, std::move(distinct));
  for (std::size_t i = 0; i < instance.pairs.size(); ++i) {
    const auto& pair = instance.pairs[i];
    if (pair.forward.size() != pair.mirrored.size()) cert.sizes_mirror = false;
    std::vector<Edge> both = pair.forward;
    both.insert(both.end(), pair.mirrored.begin(), pair.mirrored.end());
    if (!validate_matching(complete_host, both)) cert.invalid_unions.push_back(i);
    cert.matched_fraction.push_back(n == 0 ? 0.0 : static_cast<double>(both.size()) / n);
  }
  return cert;
}

// --- Manifest ---------------------------------------------------------------

void write_rs_manifest(std::ostream& out, const RSInstance& instance) {
  const auto& p = instance.params;
  out << "# rs manifest\n";
  out << "m " << p.m() << '\n';
  out << "k " << p.k() << '\n';
  out << "delta " << p.delta() << '\n';
  out << "width " << p.width() << '\n';
  out << "shift " << p.shift() << '\n';
  out << "side " << instance.side << '\n';
  out << "threshold " << p.intersection_threshold() << '\n';
  out << "family " << instance.pairs.size() << '\n';
  for (std::size_t i = 0; i < instance.pairs.size(); ++i) {
    out << "set " << i;
    for (const std::uint32_t c : instance.pairs[i].index) out << ' ' << c;
    out << '\n';
  }
  for (std::size_t id = 0; id < instance.matching_count(); ++id) {
    out << "matching " << id << ' ' << (id % 2 == 0 ? "forward" : "mirrored") << ' '
        << describe(instance.pairs[id / 2].index) << " size " << instance.matching(id).size()
        << '\n';
  }
  if (const auto& c = instance.certificate) {
    out << "certificate " << (c->ok() ? "ok" : "failed") << '\n';
    out << "pairs_checked " << c->pairs_checked << '\n';
    out << "shared_edges " << c->shared_edges << '\n';
    out << "induced_violations " << c->induced_violations << '\n';
    out << "cross_violations " << c->cross_violations << '\n';
    out << "colour_conflicts " << c->colour_conflicts << '\n';
    out << "sizes_mirror " << (c->sizes_mirror ? "yes" : "no") << '\n';
    out << "invalid_unions " << c->invalid_unions.size() << '\n';
    out << "target_fraction " << c->target_fraction << '\n';
    for (std::size_t i = 0; i < c->matched_fraction.size(); ++i) {
      out << "matched_fraction " << i << ' ' << c->matched_fraction[i] << '\n';
    }
  } else {
    out << "certificate none\n";
  }
}

ManifestHeader read_rs_manifest(std::istream& in) {
  ManifestHeader out;
  std::size_t declared = 0;
  bool have_family = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "m") {
      fields >> out.m;
    } else if (key == "k") {
      fields >> out.k;
    } else if (key == "family") {
      fields >> declared;
      have_family = true;
    } else if (key == "set") {
      std::size_t pos = 0;
      fields >> pos;
      IndexSet set;
      for (std::uint32_t c = 0; fields >> c;) set.push_back(c);
      if (pos != out.family.size()) throw std::runtime_error("manifest sets out of order");
      out.family.push_back(std::move(set));
      continue;
    } else {
      continue;
    }
    if (fields.fail()) throw std::runtime_error("malformed manifest line: " + line);
  }
  if (out.m == 0 || out.k == 0 || !have_family || declared != out.family.size()) {
    throw std::runtime_error("manifest lacks m, k or a complete family");
  }
  return out;
}

// --- lambda / lambda+ -------------------------------------------------------

std::vector<Edge> CommInstance::witness() const {
  std::vector<Edge> out = bob;
  out.insert(out.end(), sampled_special.begin(), sampled_special.end());
  return out;
}

namespace {

std::vector<Edge> uniform_subset(std::span<const Edge> edges, std::size_t size, Rng& rng) {
  std::vector<std::size_t> pick(edges.size());
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  size = std::min(size, edges.size());
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + rng.below(pick.size() - i);
    std::swap(pick[i], pick[j]);
  }
  pick.resize(size);
  std::sort(pick.begin(), pick.end());
  std::vector<Edge> out;
  out.reserve(size);
  for (const std::size_t i : pick) out.push_back(edges[i]);
  return out;
}

std::uint64_t key_of(Edge e) { return (static_cast<std::uint64_t>(e.a) << 32) | e.b; }

}  // namespace

CommInstance assemble_lambda(const RsGraph& rs, std::size_t sample_size, std::uint64_t seed,
                             std::span<const Edge> overlay) {
  if (rs.matchings.empty()) throw std::invalid_argument("RS graph has no matchings");
  Rng rng(seed);
  CommInstance out;
  out.rs_side = rs.side;
  out.plus = !overlay.empty();
  out.matchings = rs.matchings.size();

  std::vector<std::vector<Edge>> sampled;
  for (const auto& m : rs.matchings) sampled.push_back(uniform_subset(m, sample_size, rng));
  out.special = static_cast<std::size_t>(rng.below(rs.matchings.size()));
  out.sampled_special = sampled[out.special];
  for (const auto& m : sampled) out.alice.insert(out.alice.end(), m.begin(), m.end());

  // Pads X (side A) and Y (side B) take the vertices the full M_s leaves free.
  std::vector<std::uint8_t> covered_a(rs.side, 0);
  std::vector<std::uint8_t> covered_b(rs.side, 0);
  for (const Edge e : rs.matchings[out.special]) {
    covered_a[e.a] = 1;
    covered_b[e.b] = 1;
  }
  for (Vertex b = 0; b < rs.side; ++b) {
    if (!covered_b[b]) out.bob.push_back({rs.side + out.x_pads++, b});
  }
  for (Vertex a = 0; a < rs.side; ++a) {
    if (!covered_a[a]) out.bob.push_back({a, rs.side + out.y_pads++});
  }

  std::vector<Edge> stream(overlay.begin(), overlay.end());
  std::vector<std::uint64_t> overlay_keys;
  for (const Edge e : overlay) overlay_keys.push_back(key_of(e));
  std::sort(overlay_keys.begin(), overlay_keys.end());
  std::vector<std::uint64_t> alice_keys;
  for (const Edge e : out.alice) {
    alice_keys.push_back(key_of(e));
    if (!std::binary_search(overlay_keys.begin(), overlay_keys.end(), key_of(e))) {
      stream.push_back(e);
    }
  }
  std::sort(alice_keys.begin(), alice_keys.end());
  for (const Edge e : overlay) {
    if (!std::binary_search(alice_keys.begin(), alice_keys.end(), key_of(e))) {
      out.overlay_added.push_back(e);
    }
  }
  out.overlay.assign(overlay.begin(), overlay.end());
  stream.insert(stream.end(), out.bob.begin(), out.bob.end());
  out.graph = BipartiteGraph(rs.side + out.x_pads, rs.side + out.y_pads, std::move(stream));
  return out;
}

std::vector<Edge> perfect_overlay(const RSInstance& instance, std::size_t pair) {
  const auto& mp = instance.pairs.at(pair);
  std::vector<Edge> p = mp.forward;
  p.insert(p.end(), mp.mirrored.begin(), mp.mirrored.end());
  std::vector<std::uint8_t> covered_a(instance.side, 0);
  std::vector<std::uint8_t> covered_b(instance.side, 0);
  for (const Edge e : p) {
    covered_a[e.a] = 1;
    covered_b[e.b] = 1;
  }
  // F: the i-th free A vertex with the i-th free B vertex.
  Vertex b = 0;
  for (Vertex a = 0; a < instance.side; ++a) {
    if (covered_a[a]) continue;
    while (covered_b[b]) ++b;
    p.push_back({a, b++});
  }
  return p;
}

CommInstance gen_lambda(const RSInstance& instance, const LambdaOptions& options) {
  if (!instance.certificate || !instance.certificate->ok()) {
    throw std::invalid_argument("lambda instances need a certified RS instance");
  }
  RsGraph rs;
  rs.side = instance.side;
  std::vector<Edge> overlay;
  if (options.plus) {
    if (options.designated_pair >= instance.pairs.size()) {
      throw std::invalid_argument("designated pair out of range");
    }
    if (instance.pairs.size() < 2) {
      throw std::invalid_argument("lambda+ needs at least two index sets");
    }
    overlay = perfect_overlay(instance, options.designated_pair);
  }
  for (std::size_t id = 0; id < instance.matching_count(); ++id) {
    if (options.plus && id / 2 == options.designated_pair) continue;
    const auto m = instance.matching(id);
    rs.matchings.emplace_back(m.begin(), m.end());
  }

  std::size_t smallest = std::numeric_limits<std::size_t>::max();
  for (const auto& m : rs.matchings) smallest = std::min(smallest, m.size());
  // (1/2 - 2 delta) N is non-positive unless delta < 1/4, which needs m >= 24
  // and is out of reach at materialisable sizes; the full matchings are kept then.
  std::size_t sample = smallest;
  if (options.sample_size) {
    sample = *options.sample_size;
  } else {
    const double target = (0.5 - 2.0 * instance.params.delta()) * instance.side;
    if (target >= 1.0) sample = static_cast<std::size_t>(std::floor(target));
  }
  return assemble_lambda(rs, sample, options.seed, overlay);
}

}  // namespace ssm

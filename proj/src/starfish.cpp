#include "sweepout/starfish.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace sweepout {

Rational StarfishFiber::length() const {
  Rational total = 0;
  for (const auto& a : arcs) total += a.length;
  return total;
}

std::map<std::string, int> StarfishFiber::degrees() const {
  std::map<std::string, int> deg;
  for (const auto& v : isolated) deg[v] += 0;
  for (const auto& a : arcs) {
    ++deg[a.from];
    ++deg[a.to];
  }
  return deg;
}

bool StarfishFiber::is_cycle() const {
  for (const auto& [v, d] : degrees())
    if (d % 2 != 0) return false;
  return true;
}

std::size_t StarfishFiber::component_count() const {
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& v) -> std::string {
    auto it = parent.find(v);
    if (it == parent.end()) return parent[v] = v;
    if (it->second == v) return v;
    return parent[v] = find(it->second);
  };
  for (const auto& v : isolated) find(v);
  for (const auto& a : arcs) {
    auto ra = find(a.from);
    auto rb = find(a.to);
    if (ra != rb) parent[ra] = rb;
  }
  std::size_t roots = 0;
  for (const auto& [v, p] : parent) roots += find(v) == v;
  return roots;
}

bool StarfishFiber::is_simple_loop() const {
  if (arcs.empty() || !isolated.empty() || component_count() != 1) return false;
  for (const auto& [v, d] : degrees())
    if (d != 2) return false;
  return true;
}

Rational symmetric_difference_length(const StarfishFiber& a, const StarfishFiber& b) {
  std::map<std::string, std::pair<int, Rational>> count;
  for (const auto& e : a.arcs) {
    count[e.site].first += 1;
    count[e.site].second = e.length;
  }
  for (const auto& e : b.arcs) {
    count[e.site].first -= 1;
    count[e.site].second = e.length;
  }
  Rational total = 0;
  for (const auto& [site, c] : count) total += std::abs(c.first) * c.second;
  return total;
}

namespace {

StarfishFiber join(std::string ray, Rational param, const std::vector<const StarfishFiber*>& parts) {
  StarfishFiber f{std::move(ray), std::move(param), {}, {}};
  for (const auto* p : parts) {
    f.arcs.insert(f.arcs.end(), p->arcs.begin(), p->arcs.end());
    f.isolated.insert(f.isolated.end(), p->isolated.begin(), p->isolated.end());
  }
  return f;
}

// Closed polygon through `names` with every side of length `side`; sites are
// tagged with `tag`.
std::vector<FiberArc> polygon(const std::vector<std::string>& names, const Rational& side, const std::string& tag) {
  std::vector<FiberArc> arcs;
  for (std::size_t k = 0; k < names.size(); ++k) {
    arcs.push_back({names[k], names[(k + 1) % names.size()], tag + "." + std::to_string(k), side});
  }
  return arcs;
}

std::string edge_site(const std::string& a, const std::string& b) {
  return "e:" + std::min(a, b) + "|" + std::max(a, b);
}

}  // namespace

StarfishInstance make_starfish(const Rational& leg_length, const Rational& tube_radius, int resolution, int levels) {
  if (leg_length <= 0 || tube_radius <= 0) throw DomainError("starfish: leg length and tube radius must be positive");
  if (resolution < 4 || resolution % 2 != 0) {
    throw DomainError("starfish: resolution must be an even number of ring vertices, at least 4, to cubulate the caps");
  }
  if (levels < 1) throw DomainError("starfish: at least one ring per leg is needed");
  StarfishInstance s;
  s.leg_length = leg_length;
  s.tube_radius = tube_radius;
  s.resolution = resolution;
  s.levels = levels;
  const int m = resolution;
  const int q = m / 2 - 1;
  const int K = levels;
  s.chord = m == 6 ? tube_radius : rational_from_double(2.0 * to_double(tube_radius) * std::sin(std::numbers::pi / m));
  const Rational vertical = leg_length / K;

  auto add_vertex = [&](const std::string& name) {
    s.vertex_index[name] = s.vertex_names.size();
    s.vertex_names.push_back(name);
  };
  auto id = [&](const std::string& name) { return s.vertex_index.at(name); };
  auto add_edge = [&](const std::string& a, const std::string& b, const Rational& len) {
    s.edges.push_back({id(a), id(b)});
    s.edge_lengths.push_back(len);
  };

  add_vertex("N");
  add_vertex("S");
  std::vector<std::vector<std::string>> arcs(3);  // N, interior, S
  for (int j = 0; j < 3; ++j) {
    arcs[j].push_back("N");
    for (int k = 1; k <= q; ++k) {
      arcs[j].push_back("a" + std::to_string(j) + "." + std::to_string(k));
      add_vertex(arcs[j].back());
    }
    arcs[j].push_back("S");
    for (std::size_t k = 0; k + 1 < arcs[j].size(); ++k) add_edge(arcs[j][k], arcs[j][k + 1], s.chord);
  }
  std::vector<std::vector<std::vector<std::string>>> rings(3);  // leg, level, position
  std::vector<std::vector<int>> squares;
  for (int i = 0; i < 3; ++i) {
    std::vector<std::string> ring0 = arcs[i];
    const auto& next = arcs[(i + 1) % 3];
    for (int k = q; k >= 1; --k) ring0.push_back(next[static_cast<std::size_t>(k)]);
    rings[i].push_back(ring0);
    for (int y = 1; y <= K; ++y) {
      std::vector<std::string> ring;
      for (int k = 0; k < m; ++k) {
        ring.push_back("l" + std::to_string(i) + "." + std::to_string(y) + "." + std::to_string(k));
        add_vertex(ring.back());
      }
      for (int k = 0; k < m; ++k) {
        add_edge(ring[static_cast<std::size_t>(k)], ring[static_cast<std::size_t>((k + 1) % m)], s.chord);
        add_edge(rings[i].back()[static_cast<std::size_t>(k)], ring[static_cast<std::size_t>(k)], vertical);
      }
      const auto& below = rings[i].back();
      for (int k = 0; k < m; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const auto uk1 = static_cast<std::size_t>((k + 1) % m);
        squares.push_back({static_cast<int>(id(below[uk])), static_cast<int>(id(below[uk1])),
                           static_cast<int>(id(ring[uk])), static_cast<int>(id(ring[uk1]))});
      }
      rings[i].push_back(ring);
    }
    const std::string cap = "c" + std::to_string(i);
    add_vertex(cap);
    const auto& top = rings[i].back();
    for (int j = 0; j < m / 2; ++j) {
      const auto a = top[static_cast<std::size_t>(2 * j)];
      const auto mid = top[static_cast<std::size_t>(2 * j + 1)];
      const auto b = top[static_cast<std::size_t>((2 * j + 2) % m)];
      add_edge(cap, a, tube_radius);
      squares.push_back({static_cast<int>(id(cap)), static_cast<int>(id(a)), static_cast<int>(id(b)),
                         static_cast<int>(id(mid))});
    }
  }
  s.M = from_labeled_cubes(2, squares);
  if (s.M.cell_count(0) != s.vertex_names.size() || s.M.cell_count(1) != s.edges.size()) {
    throw DomainError("internal: starfish cubulation does not match its edge list");
  }
  s.metric = FiniteMetricSpace::from_graph(s.vertex_names.size(), s.edges, s.edge_lengths);
  s.metric.degree = 2;

  auto m_edges = [&](const std::vector<std::string>& path, bool closed) {
    std::vector<FiberArc> out;
    const std::size_t count = closed ? path.size() : path.size() - 1;
    for (std::size_t k = 0; k < count; ++k) {
      const auto& a = path[k];
      const auto& b = path[(k + 1) % path.size()];
      out.push_back({a, b, edge_site(a, b), s.chord});
    }
    return out;
  };
  s.center.ray = "center";
  s.center.param = 0;
  for (const auto& arc : arcs) {
    auto e = m_edges(arc, false);
    s.center.arcs.insert(s.center.arcs.end(), e.begin(), e.end());
  }
  for (int i = 0; i < 3; ++i) {
    const std::string ray = "leg" + std::to_string(i);
    std::vector<StarfishFiber> fibers;
    for (int y = 0; y <= K; ++y) fibers.push_back({ray, Rational(y), m_edges(rings[i][static_cast<std::size_t>(y)], true), {}});
    std::vector<std::string> names;
    for (int k = 0; k < m; ++k) names.push_back("cap" + std::to_string(i) + "@" + std::to_string(k));
    fibers.push_back({ray, Rational(2 * K + 1, 2), polygon(names, s.chord / 2, "cap" + std::to_string(i) + ".half"), {}});
    fibers.push_back({ray, Rational(K + 1), {}, {"c" + std::to_string(i)}});
    s.rays.push_back(std::move(fibers));
  }
  s.max_fiber_length = s.center.length();
  s.max_loop_length = 0;
  std::vector<const StarfishFiber*> limits;
  for (const auto& ray : s.rays) {
    limits.push_back(&ray.front());
    for (const auto& f : ray) {
      s.max_fiber_length = std::max(s.max_fiber_length, f.length());
      if (f.is_simple_loop()) s.max_loop_length = std::max(s.max_loop_length, f.length());
    }
  }
  s.center_jump = symmetric_difference_length(s.center, join("limits", 0, limits));
  return s;
}

HexapodSweepout hexapodize(const StarfishInstance& s) {
  if (s.rays.size() != 3 || s.resolution < 4) throw DomainError("hexapodize: input is not a starfish");
  const int m = s.resolution;
  const int q = m / 2 - 1;
  const int K = s.levels;
  HexapodSweepout h;
  // Two copies of every arc of the theta graph, running side by side.
  std::vector<std::array<StarfishFiber, 2>> copies(3);
  for (int j = 0; j < 3; ++j) {
    for (int c = 0; c < 2; ++c) {
      const std::string tag = "arc" + std::to_string(j) + (c == 0 ? "'" : "\"");
      std::vector<std::string> path{"N"};
      for (int k = 1; k <= q; ++k) path.push_back("a" + std::to_string(j) + "." + std::to_string(k) + (c == 0 ? "'" : "\""));
      path.push_back("S");
      auto& f = copies[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
      for (std::size_t k = 0; k + 1 < path.size(); ++k) f.arcs.push_back({path[k], path[k + 1], tag + "." + std::to_string(k), s.chord});
    }
  }
  std::vector<const StarfishFiber*> all_copies;
  for (const auto& pair : copies)
    for (const auto& c : pair) all_copies.push_back(&c);
  h.center = join("center", 0, all_copies);

  // Legs: the petal of leg i is one copy of arc i and the other copy of arc i+1.
  for (int i = 0; i < 3; ++i) {
    const std::string ray = "leg" + std::to_string(i);
    auto petal = join(ray, 0, {&copies[static_cast<std::size_t>(i)][0], &copies[static_cast<std::size_t>((i + 1) % 3)][1]});
    h.center_shares.push_back(petal);
    std::vector<StarfishFiber> fibers{petal};
    for (std::size_t k = 1; k < s.rays[static_cast<std::size_t>(i)].size(); ++k) fibers.push_back(s.rays[static_cast<std::size_t>(i)][k]);
    h.rays.push_back(std::move(fibers));
  }
  // Thin disks around the arcs, swept by concentric loops.
  for (int j = 0; j < 3; ++j) {
    const std::string ray = "disk" + std::to_string(j);
    auto digon = join(ray, 0, {&copies[static_cast<std::size_t>(j)][0], &copies[static_cast<std::size_t>(j)][1]});
    h.center_shares.push_back(digon);
    std::vector<std::string> names;
    for (int k = 0; k < 2 * (q + 1); ++k) names.push_back("d" + std::to_string(j) + "@" + std::to_string(k));
    StarfishFiber half{ray, Rational(1, 2), polygon(names, s.chord / 2, "d" + std::to_string(j) + ".half"), {}};
    StarfishFiber point{ray, Rational(1), {}, {"d" + std::to_string(j) + ".pt"}};
    h.rays.push_back({digon, half, point});
  }

  h.max_fiber_length = h.center.length();
  h.max_loop_length = 0;
  h.all_cycles = h.center.is_cycle();
  h.max_consecutive_difference = 0;
  for (std::size_t r = 0; r < h.rays.size(); ++r) {
    const auto& ray = h.rays[r];
    const StarfishFiber* prev = &h.center_shares[r];
    for (const auto& f : ray) {
      h.max_fiber_length = std::max(h.max_fiber_length, f.length());
      if (f.is_simple_loop()) h.max_loop_length = std::max(h.max_loop_length, f.length());
      h.all_cycles = h.all_cycles && f.is_cycle();
      h.max_consecutive_difference = std::max(h.max_consecutive_difference, symmetric_difference_length(*prev, f));
      prev = &f;
    }
  }
  std::vector<const StarfishFiber*> leg_limits, disk_limits;
  for (std::size_t r = 0; r < 3; ++r) leg_limits.push_back(&h.rays[r].front());
  for (std::size_t r = 3; r < 6; ++r) disk_limits.push_back(&h.rays[r].front());
  h.center_jump = std::max(symmetric_difference_length(h.center, join("legs", 0, leg_limits)),
                           symmetric_difference_length(h.center, join("disks", 0, disk_limits)));

  // Disk rays run over [0, 1/2] from their far ends, legs over [1/2, 1].
  for (std::size_t k = h.rays[3].size(); k-- > 1;) {
    std::vector<const StarfishFiber*> parts;
    for (std::size_t r = 3; r < 6; ++r) parts.push_back(&h.rays[r][k]);
    Rational t = (1 - h.rays[3][k].param) / 2;
    h.circle.push_back({t, join("circle", t, parts)});
  }
  h.circle.push_back({Rational(1, 2), h.center});
  for (std::size_t k = 1; k < h.rays[0].size(); ++k) {
    std::vector<const StarfishFiber*> parts;
    for (std::size_t r = 0; r < 3; ++r) parts.push_back(&h.rays[r][k]);
    Rational t = Rational(1, 2) + h.rays[0][k].param / (2 * (K + 1));
    h.circle.push_back({t, join("circle", t, parts)});
  }
  for (const auto& c : h.circle) h.all_cycles = h.all_cycles && c.fiber.is_cycle();
  h.tripod_max_fiber_length = s.max_fiber_length;
  h.length_ratio = h.max_fiber_length / s.max_fiber_length;
  return h;
}

SweepoutMeasurements measurements(const StarfishInstance& s) {
  Rational diameter = 0;
  auto consider = [&](const StarfishFiber& f) {
    std::vector<std::size_t> pts;
    for (const auto& [v, d] : f.degrees()) {
      auto it = s.vertex_index.find(v);
      if (it == s.vertex_index.end()) return;
      pts.push_back(it->second);
    }
    for (auto a : pts)
      for (auto b : pts) diameter = std::max(diameter, s.metric(a, b));
  };
  consider(s.center);
  for (const auto& ray : s.rays)
    for (const auto& f : ray) consider(f);
  Rational longest = *std::max_element(s.edge_lengths.begin(), s.edge_lengths.end());
  SweepoutMeasurements out;
  out.waist_upper = to_double(s.max_fiber_length);
  out.urysohn_upper = to_double(diameter + 2 * longest);
  out.source = "fibers of the starfish over the tripod";
  return out;
}

}  // namespace sweepout

#include "nlg/groupoid_json.hpp"

#include <string>

namespace nlg::fin {
namespace {

using nlohmann::json;

int index_in(const json& v, std::size_t bound, const char* what) {
  if (!v.is_number_integer()) throw std::invalid_argument(std::string(what) + ": expected an integer index");
  const auto i = v.get<long long>();
  if (i < 0 || static_cast<std::size_t>(i) >= bound)
    throw std::invalid_argument(std::string(what) + ": index out of range");
  return static_cast<int>(i);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

}  // namespace

json to_json(const FiniteGroupoid& G) {
  json arrows = json::array();
  for (std::size_t g = 0; g < G.num_arrows(); ++g)
    arrows.push_back({{"name", G.arrows[g]}, {"s", G.s[g]}, {"t", G.t[g]}, {"inv", G.inv[g]}});
  json comp = json::array();
  for (std::size_t g = 0; g < G.num_arrows(); ++g)
    for (std::size_t h = 0; h < G.num_arrows(); ++h) {
      const int gh = G.comp[g * G.num_arrows() + h];
      if (gh != kNone) comp.push_back({g, h, gh});
    }
  return {{"name", G.name}, {"objects", G.objects}, {"arrows", arrows},
          {"units", G.unit},  {"composition", comp}};
}

json to_json(const FinitePGB& P) {
  json total = json::array();
  for (std::size_t p = 0; p < P.size(); ++p)
    total.push_back({{"name", P.total[p]}, {"proj", P.proj[p]}, {"moment", P.moment[p]}});
  json action = json::array();
  const std::size_t na = P.G.num_arrows();
  for (std::size_t p = 0; p < P.size(); ++p)
    for (std::size_t g = 0; g < na; ++g) {
      const int pg = P.act[p * na + g];
      if (pg != kNone) action.push_back({p, g, pg});
    }
  return {{"name", P.name}, {"groupoid", to_json(P.G)}, {"base", P.base},
          {"total", total},  {"action", action}};
}

FiniteGroupoid groupoid_from_json(const json& j) {
  FiniteGroupoid G;
  G.name = j.value("name", std::string("groupoid"));
  G.objects = field(j, "objects").get<std::vector<std::string>>();
  const std::size_t no = G.objects.size();
  for (const auto& a : field(j, "arrows")) {
    G.arrows.push_back(a.value("name", "g" + std::to_string(G.arrows.size())));
    G.s.push_back(index_in(field(a, "s"), no, "arrow source"));
    G.t.push_back(index_in(field(a, "t"), no, "arrow target"));
  }
  const std::size_t na = G.arrows.size();
  for (const auto& a : field(j, "arrows")) G.inv.push_back(index_in(field(a, "inv"), na, "arrow inverse"));
  for (const auto& u : field(j, "units")) G.unit.push_back(index_in(u, na, "unit"));
  if (G.unit.size() != no) throw std::invalid_argument("units: one entry per object expected");
  G.comp.assign(na * na, kNone);
  for (const auto& c : field(j, "composition")) {
    if (!c.is_array() || c.size() != 3) throw std::invalid_argument("composition: entries are [g, h, gh]");
    const int g = index_in(c[0], na, "composition");
    const int h = index_in(c[1], na, "composition");
    G.product_entry(g, h) = index_in(c[2], na, "composition");
  }
  return G;
}

FinitePGB bundle_from_json(const json& j) {
  FinitePGB P;
  P.name = j.value("name", std::string("bundle"));
  P.G = groupoid_from_json(field(j, "groupoid"));
  P.base = field(j, "base").get<std::vector<std::string>>();
  for (const auto& e : field(j, "total")) {
    P.total.push_back(e.value("name", "p" + std::to_string(P.total.size())));
    P.proj.push_back(index_in(field(e, "proj"), P.base.size(), "projection"));
    P.moment.push_back(index_in(field(e, "moment"), P.G.num_objects(), "moment"));
  }
  const std::size_t na = P.G.num_arrows();
  P.act.assign(P.size() * na, kNone);
  for (const auto& a : field(j, "action")) {
    if (!a.is_array() || a.size() != 3) throw std::invalid_argument("action: entries are [p, g, pg]");
    const int p = index_in(a[0], P.size(), "action");
    const int g = index_in(a[1], na, "action");
    P.action_entry(p, g) = index_in(a[2], P.size(), "action");
  }
  return P;
}

}  // namespace nlg::fin

#include "hiernet/pnml.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "hiernet/errors.hpp"

namespace hiernet {

namespace pt = boost::property_tree;

namespace {

constexpr const char* kGrammar = "http://www.pnml.org/version-2009/grammar/pnml";
constexpr const char* kPtNet = "http://www.pnml.org/version-2009/grammar/ptnet";

pt::ptree labelled(const std::string& xml_id, const std::string& name) {
  pt::ptree node;
  node.put("<xmlattr>.id", xml_id);
  node.put("name.text", name);
  return node;
}

struct Reader {
  std::map<std::string, std::string> place_names;       // xml id -> name
  std::map<std::string, std::string> transition_names;  // xml id -> name
  std::vector<std::string> places;
  std::vector<std::string> transition_order;
  Marking initial;
  struct Arc {
    std::string source, target;
    Multiset::Count weight;
  };
  std::vector<Arc> arcs;

  static std::string name_or_id(const pt::ptree& node, const std::string& id) {
    return node.get<std::string>("name.text", id);
  }

  static Multiset::Count count_of(const pt::ptree& node, const char* path, Multiset::Count fallback) {
    auto text = node.get_optional<std::string>(path);
    if (!text) return fallback;
    try {
      std::size_t used = 0;
      const long long value = std::stoll(*text, &used);
      if (value < 0) throw std::invalid_argument("negative");
      return static_cast<Multiset::Count>(value);
    } catch (const std::exception&) {
      throw ValidationError("", std::string("bad count '") + *text + "' in " + path);
    }
  }

  void read(const pt::ptree& container) {
    for (const auto& [tag, node] : container) {
      if (tag == "page") {
        read(node);
      } else if (tag == "place") {
        const auto id = node.get<std::string>("<xmlattr>.id");
        const auto name = name_or_id(node, id);
        place_names.emplace(id, name);
        places.push_back(name);
        initial.add(name, count_of(node, "initialMarking.text", 0));
      } else if (tag == "transition") {
        const auto id = node.get<std::string>("<xmlattr>.id");
        transition_names.emplace(id, name_or_id(node, id));
        transition_order.push_back(id);
      } else if (tag == "arc") {
        arcs.push_back({node.get<std::string>("<xmlattr>.source"),
                        node.get<std::string>("<xmlattr>.target"),
                        count_of(node, "inscription.text", 1)});
      }
    }
  }

  PnmlDocument finish() const {
    std::map<std::string, Transition> by_id;
    for (const auto& id : transition_order) by_id[id].id = transition_names.at(id);
    for (const auto& arc : arcs) {
      if (auto p = place_names.find(arc.source); p != place_names.end()) {
        auto t = by_id.find(arc.target);
        if (t == by_id.end()) throw ValidationError("", "arc target '" + arc.target + "' is not a transition");
        t->second.pre.add(p->second, arc.weight);
      } else if (auto p2 = place_names.find(arc.target); p2 != place_names.end()) {
        auto t = by_id.find(arc.source);
        if (t == by_id.end()) throw ValidationError("", "arc source '" + arc.source + "' is not a transition");
        t->second.post.add(p2->second, arc.weight);
      } else {
        throw ValidationError("", "arc " + arc.source + " -> " + arc.target + " touches no place");
      }
    }
    std::vector<Transition> transitions;
    for (const auto& id : transition_order) transitions.push_back(by_id.at(id));
    return {PetriNet(places, std::move(transitions)), initial};
  }
};

}  // namespace

std::string to_pnml(const PetriNet& net, const Marking& initial, std::string_view net_name) {
  validate_marking(net, initial);
  pt::ptree page;
  page.put("<xmlattr>.id", "page0");

  std::map<std::string, std::string, std::less<>> place_ids;
  for (std::size_t i = 0; i < net.places().size(); ++i) {
    const std::string& name = net.places()[i];
    const std::string id = "p" + std::to_string(i);
    place_ids.emplace(name, id);
    pt::ptree node = labelled(id, name);
    if (auto n = initial.count(name); n > 0) node.put("initialMarking.text", n);
    page.add_child("place", node);
  }
  std::vector<pt::ptree> arcs;
  for (std::size_t i = 0; i < net.transitions().size(); ++i) {
    const Transition& t = net.transitions()[i];
    const std::string id = "t" + std::to_string(i);
    page.add_child("transition", labelled(id, t.id));
    auto arc = [&](const std::string& source, const std::string& target, Multiset::Count w) {
      pt::ptree node;
      node.put("<xmlattr>.id", "a" + std::to_string(arcs.size()));
      node.put("<xmlattr>.source", source);
      node.put("<xmlattr>.target", target);
      node.put("inscription.text", w);
      arcs.push_back(std::move(node));
    };
    for (const auto& [place, w] : t.pre) arc(place_ids.at(place), id, w);
    for (const auto& [place, w] : t.post) arc(id, place_ids.at(place), w);
  }
  for (auto& node : arcs) page.add_child("arc", node);

  pt::ptree doc;
  pt::ptree& pnml = doc.add("pnml", "");
  pnml.put("<xmlattr>.xmlns", kGrammar);
  pt::ptree& netnode = pnml.add("net", "");
  netnode.put("<xmlattr>.id", "net0");
  netnode.put("<xmlattr>.type", kPtNet);
  netnode.put("name.text", std::string(net_name));
  netnode.add_child("page", page);

  std::ostringstream out;
  pt::write_xml(out, doc, pt::xml_writer_make_settings<std::string>(' ', 2));
  return out.str();
}

void export_pnml(const PetriNet& net, const Marking& initial, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << to_pnml(net, initial, path.stem().string());
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

PnmlDocument from_pnml(std::string_view xml) {
  pt::ptree doc;
  std::istringstream in{std::string(xml)};
  try {
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ValidationError("", std::string("malformed PNML: ") + e.what());
  }
  auto pnml = doc.get_child_optional("pnml");
  if (!pnml) throw ValidationError("", "missing <pnml> root");
  auto netnode = pnml->get_child_optional("net");
  if (!netnode) throw ValidationError("", "missing <net>");
  Reader reader;
  try {
    reader.read(*netnode);
  } catch (const pt::ptree_error& e) {
    throw ValidationError("", std::string("malformed PNML element: ") + e.what());
  }
  return reader.finish();
}

PnmlDocument import_pnml(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_pnml(buf.str());
}

}  // namespace hiernet

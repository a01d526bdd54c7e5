#include "kinnet/graphml.hpp"

#include "kinnet/csv.hpp"

#include <charconv>
#include <map>
#include <stdexcept>

namespace kinnet {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    case '\'': out += "&apos;"; break;
    default: out.push_back(c);
    }
  }
  return out;
}

std::string xml_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    auto rest = s.substr(i);
    auto take = [&](std::string_view entity, char c) {
      if (rest.substr(0, entity.size()) == entity) {
        out.push_back(c);
        i += entity.size() - 1;
        return true;
      }
      return false;
    };
    if (take("&amp;", '&') || take("&lt;", '<') || take("&gt;", '>') ||
        take("&quot;", '"') || take("&apos;", '\'')) {
      continue;
    }
    throw std::runtime_error("graphml: unknown XML entity near '" +
                             std::string(rest.substr(0, 8)) + "'");
  }
  return out;
}

std::string node_label(const ElectionRecord& r) {
  std::string label = r.last_name + ", " + r.first_name;
  if (r.middle_name) label += " " + *r.middle_name;
  return label;
}

} // namespace

std::string to_graphml(const KinGraph& graph, const Dataset& records,
                       const Partition* partition, const std::string& meta) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n";
  out += "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n";
  out += "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  if (!meta.empty()) out += "  <!-- " + xml_escape(meta) + " -->\n";
  out += "  <key id=\"d0\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  out += "  <key id=\"d1\" for=\"node\" attr.name=\"position\" attr.type=\"string\"/>\n";
  out += "  <key id=\"d2\" for=\"node\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  out += "  <key id=\"d3\" for=\"node\" attr.name=\"community_id\" attr.type=\"long\">\n";
  out += "    <default>-1</default>\n";
  out += "  </key>\n";
  out += "  <key id=\"d4\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  out += "  <key id=\"d5\" for=\"edge\" attr.name=\"match_kind\" attr.type=\"string\"/>\n";
  out += "  <graph id=\"" + xml_escape(graph.province) + "_" +
         std::to_string(graph.year) + "\" edgedefault=\"undirected\">\n";

  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& rec = records[graph.nodes[i].record_index];
    out += "    <node id=\"n" + std::to_string(i) + "\">\n";
    out += "      <data key=\"d0\">" + xml_escape(node_label(rec)) + "</data>\n";
    out += "      <data key=\"d1\">" + std::string(position_token(rec.position)) +
           "</data>\n";
    out += "      <data key=\"d2\">" + csv::format_double(graph.nodes[i].weight) +
           "</data>\n";
    if (partition) {
      out += "      <data key=\"d3\">" +
             std::to_string(partition->assignment[i]) + "</data>\n";
    } else if (rec.community_id) {
      out += "      <data key=\"d3\">" + std::to_string(*rec.community_id) +
             "</data>\n";
    }
    out += "    </node>\n";
  }
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    out += "    <edge id=\"e" + std::to_string(e) + "\" source=\"n" +
           std::to_string(edge.u) + "\" target=\"n" + std::to_string(edge.v) +
           "\">\n";
    out += "      <data key=\"d4\">" + csv::format_double(edge.weight) + "</data>\n";
    out += "      <data key=\"d5\">" + std::string(match_kind_token(edge.kind)) +
           "</data>\n";
    out += "    </edge>\n";
  }
  out += "  </graph>\n";
  out += "</graphml>\n";
  return out;
}

namespace {

// Minimal XML pull parser for the GraphML subset we write.
struct XmlTag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;      // </name>
  bool self_closing = false; // <name/>
};

class XmlReader {
public:
  explicit XmlReader(const std::string& text) : text_(text) {}

  // Returns false at end of input. Text content between tags is accumulated
  // into `pending_text`.
  bool next(XmlTag& tag, std::string& pending_text) {
    pending_text.clear();
    while (pos_ < text_.size()) {
      if (text_[pos_] != '<') {
        pending_text.push_back(text_[pos_++]);
        continue;
      }
      if (text_.compare(pos_, 4, "<!--") == 0) {
        auto end = text_.find("-->", pos_);
        if (end == std::string::npos) throw std::runtime_error("graphml: unterminated comment");
        pos_ = end + 3;
        continue;
      }
      if (text_.compare(pos_, 2, "<?") == 0) {
        auto end = text_.find("?>", pos_);
        if (end == std::string::npos) throw std::runtime_error("graphml: unterminated declaration");
        pos_ = end + 2;
        continue;
      }
      return parse_tag(tag);
    }
    return false;
  }

private:
  bool parse_tag(XmlTag& tag) {
    tag = XmlTag{};
    ++pos_; // consume '<'
    if (pos_ < text_.size() && text_[pos_] == '/') {
      tag.closing = true;
      ++pos_;
    }
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '>' &&
           text_[pos_] != '/') {
      tag.name.push_back(text_[pos_++]);
    }
    if (tag.name.empty()) throw std::runtime_error("graphml: empty tag name");
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) throw std::runtime_error("graphml: unterminated tag");
      if (text_[pos_] == '>') {
        ++pos_;
        return true;
      }
      if (text_[pos_] == '/') {
        ++pos_;
        if (pos_ >= text_.size() || text_[pos_] != '>') {
          throw std::runtime_error("graphml: malformed self-closing tag");
        }
        ++pos_;
        tag.self_closing = true;
        return true;
      }
      // attribute
      std::string name;
      while (pos_ < text_.size() && text_[pos_] != '=' && !is_space(text_[pos_])) {
        name.push_back(text_[pos_++]);
      }
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '=') {
        throw std::runtime_error("graphml: attribute '" + name + "' missing value");
      }
      ++pos_;
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '"') {
        throw std::runtime_error("graphml: attribute '" + name + "' value not quoted");
      }
      ++pos_;
      std::string value;
      while (pos_ < text_.size() && text_[pos_] != '"') value.push_back(text_[pos_++]);
      if (pos_ >= text_.size()) throw std::runtime_error("graphml: unterminated attribute value");
      ++pos_;
      tag.attrs[name] = xml_unescape(value);
    }
  }

  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  }
  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

struct KeyDecl {
  std::string domain; // "node" | "edge"
  std::string attr_name;
  std::string attr_type;
  std::string default_value;
};

double to_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) {
    throw std::runtime_error("graphml: bad " + what + " value '" + s + "'");
  }
  return v;
}

long to_long(const std::string& s, const std::string& what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("graphml: bad " + what + " value '" + s + "'");
  }
  return v;
}

} // namespace

GraphmlGraph parse_graphml(const std::string& xml) {
  XmlReader reader(xml);
  GraphmlGraph out;
  std::map<std::string, KeyDecl> keys;

  XmlTag tag;
  std::string text;
  bool in_graphml = false, in_graph = false, graph_seen = false;
  std::string current_key_id; // inside <key>...</key> for <default>
  GraphmlGraph::Node* node = nullptr;
  GraphmlGraph::Edge* edge = nullptr;
  std::string data_key;
  bool in_data = false, in_default = false;
  std::string data_text;
  std::map<std::string, std::size_t> node_ids;

  auto require = [](bool cond, const char* msg) {
    if (!cond) throw std::runtime_error(std::string("graphml: ") + msg);
  };
  auto attr = [&](const XmlTag& t, const char* name) -> std::string {
    auto it = t.attrs.find(name);
    require(it != t.attrs.end(), (t.name + " missing attribute " + name).c_str());
    return it->second;
  };

  auto apply_data = [&](const std::string& key_id, const std::string& raw) {
    const std::string value = xml_unescape(raw);
    auto it = keys.find(key_id);
    require(it != keys.end(), ("reference to undeclared key '" + key_id + "'").c_str());
    const KeyDecl& decl = it->second;
    if (node) {
      require(decl.domain == "node", "node data bound to non-node key");
      if (decl.attr_name == "label") node->label = value;
      else if (decl.attr_name == "position") node->position = value;
      else if (decl.attr_name == "weight") node->weight = to_double(value, "node weight");
      else if (decl.attr_name == "community_id") node->community_id = to_long(value, "community_id");
    } else if (edge) {
      require(decl.domain == "edge", "edge data bound to non-edge key");
      if (decl.attr_name == "weight") edge->weight = to_double(value, "edge weight");
      else if (decl.attr_name == "match_kind") edge->match_kind = value;
    } else {
      throw std::runtime_error("graphml: <data> outside node/edge");
    }
  };

  while (reader.next(tag, text)) {
    if (in_data || in_default) {
      // text content belongs to the enclosing data/default element
      data_text += text;
    }
    if (tag.name == "graphml") {
      if (tag.closing) {
        in_graphml = false;
      } else {
        require(!in_graphml, "nested graphml");
        in_graphml = true;
      }
    } else if (tag.name == "key") {
      require(in_graphml && !in_graph, "key outside graphml prologue");
      if (!tag.closing) {
        KeyDecl decl;
        decl.domain = attr(tag, "for");
        decl.attr_name = attr(tag, "attr.name");
        decl.attr_type = attr(tag, "attr.type");
        std::string id = attr(tag, "id");
        keys[id] = decl;
        if (!tag.self_closing) current_key_id = id;
      } else {
        current_key_id.clear();
      }
    } else if (tag.name == "default") {
      require(!current_key_id.empty(), "default outside key");
      if (!tag.closing) {
        in_default = true;
        data_text.clear();
      } else {
        keys[current_key_id].default_value = xml_unescape(data_text);
        in_default = false;
      }
    } else if (tag.name == "graph") {
      if (tag.closing) {
        in_graph = false;
      } else {
        require(in_graphml && !graph_seen, "expected exactly one graph element");
        require(attr(tag, "edgedefault") == "undirected", "graph must be undirected");
        out.graph_id = attr(tag, "id");
        in_graph = true;
        graph_seen = true;
      }
    } else if (tag.name == "node") {
      if (tag.closing) {
        node = nullptr;
      } else {
        require(in_graph, "node outside graph");
        GraphmlGraph::Node n;
        n.id = attr(tag, "id");
        require(!node_ids.count(n.id), "duplicate node id");
        // apply community default
        for (const auto& [id, decl] : keys) {
          if (decl.domain == "node" && decl.attr_name == "community_id" &&
              !decl.default_value.empty()) {
            n.community_id = to_long(decl.default_value, "community default");
          }
        }
        node_ids[n.id] = out.nodes.size();
        out.nodes.push_back(std::move(n));
        if (!tag.self_closing) node = &out.nodes.back();
      }
    } else if (tag.name == "edge") {
      if (tag.closing) {
        edge = nullptr;
      } else {
        require(in_graph, "edge outside graph");
        GraphmlGraph::Edge e;
        e.source = attr(tag, "source");
        e.target = attr(tag, "target");
        require(node_ids.count(e.source) != 0, "edge source references unknown node");
        require(node_ids.count(e.target) != 0, "edge target references unknown node");
        out.edges.push_back(std::move(e));
        if (!tag.self_closing) edge = &out.edges.back();
      }
    } else if (tag.name == "data") {
      if (!tag.closing) {
        data_key = attr(tag, "key");
        in_data = true;
        data_text.clear();
      } else {
        apply_data(data_key, data_text);
        in_data = false;
      }
    } else {
      throw std::runtime_error("graphml: unexpected element <" + tag.name + ">");
    }
  }
  require(graph_seen, "no graph element found");
  require(!in_graphml, "unclosed graphml element");
  return out;
}

} // namespace kinnet

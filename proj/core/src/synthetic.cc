#include "prag/synthetic.h"

#include <cstdio>

#include "json_util.h"
#include "prag/error.h"

namespace prag {

using detail::json;

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw_invalid_argument("Rng::index needs n > 0");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  // Largest multiple of n representable in 64 bits.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return static_cast<std::size_t>(x % bound);
}

void SyntheticGrammar::validate() const {
  if (!(omission_rate >= 0.0 && omission_rate <= 1.0)) {
    throw_invalid_argument("omission rate must lie in [0, 1]");
  }
  const Attribute* subject = schema.find(subject_attribute);
  if (subject == nullptr) {
    throw_invalid_argument("subject attribute '" + subject_attribute +
                           "' is not in the schema");
  }
  auto check_templates = [](const std::string& who,
                            const std::vector<std::string>& ts,
                            bool needs_value) {
    if (ts.size() < 2) {
      throw_invalid_argument("'" + who + "' needs at least two templates");
    }
    for (const auto& t : ts) {
      if (needs_value && t.find("{v}") == std::string::npos) {
        throw_invalid_argument("template '" + t + "' for '" + who +
                               "' does not realize {v}");
      }
    }
  };
  for (const auto& a : schema.attributes()) {
    if (a.kind == AttributeKind::kDelexicalized) {
      auto it = surface_values.find(a.name);
      if (it == surface_values.end() || it->second.empty()) {
        throw_invalid_argument("no surface values for '" + a.name + "'");
      }
    }
    if (a.kind == AttributeKind::kBoolean) {
      auto it = boolean_templates.find(a.name);
      if (it == boolean_templates.end()) {
        throw_invalid_argument("no templates for '" + a.name + "'");
      }
      for (const auto& v : a.values) {
        auto jt = it->second.find(v);
        if (jt == it->second.end()) {
          throw_invalid_argument("no templates for '" + a.name + "' = '" + v +
                                 "'");
        }
        check_templates(a.name + "=" + v, jt->second, false);
      }
    } else {
      auto it = templates.find(a.name);
      if (it == templates.end()) {
        throw_invalid_argument("no templates for '" + a.name + "'");
      }
      check_templates(a.name, it->second, true);
    }
    if (a.name == subject_attribute) continue;
    auto p = presence.find(a.name);
    if (p == presence.end()) {
      throw_invalid_argument("no presence probability for '" + a.name + "'");
    }
    if (!(p->second >= 0.0 && p->second <= 1.0)) {
      throw_invalid_argument("presence of '" + a.name +
                             "' must lie in [0, 1]");
    }
  }
  check_templates("fallback", fallback_templates, false);
}

SyntheticGrammar default_grammar() { return default_grammar(default_e2e_schema()); }

SyntheticGrammar default_grammar(const AttributeSchema& schema) {
  SyntheticGrammar g;
  g.schema = schema;
  g.omission_rate = 0.1;
  for (const auto& a : schema.attributes()) {
    if (a.name != g.subject_attribute) g.presence[a.name] = 0.8;
  }
  g.templates = {
      {"name", {"{v}", "the venue {v}"}},
      {"eatType", {"is a {v}", "is a {v} venue"}},
      {"food", {"serves {v} food", "offers {v} cuisine"}},
      {"priceRange", {"has a {v} price range", "charges {v} prices"}},
      {"customerRating",
       {"has a customer rating of {v}", "is rated {v} by customers"}},
      {"area", {"is in the {v} area", "is located in the {v}"}},
      {"near", {"is near {v}", "is close to {v}"}},
  };
  g.boolean_templates = {
      {"familyFriendly",
       {{"yes", {"is family friendly", "is kid friendly"}},
        {"no", {"is not family friendly", "is not child friendly"}}}},
  };
  g.surface_values = {
      {"name",
       {"Alimentum", "Aromi", "Bibimbap House", "Blue Spice",
        "Browns Cambridge", "Clowns", "Cocum", "Cotto", "Fitzbillies",
        "Giraffe", "Green Man", "Loch Fyne", "Midsummer House", "Strada",
        "Taste of Cambridge", "The Cricketers", "The Dumpling Tree",
        "The Golden Curry", "The Mill", "The Olive Grove", "The Phoenix",
        "The Plough", "The Punter", "The Rice Boat", "The Twenty Two",
        "The Vaults", "The Waterman", "Wildwood", "Zizzi"}},
      {"near",
       {"All Bar One", "Burger King", "Cafe Adriatic", "Cafe Brazil",
        "Cafe Rouge", "Cafe Sicilia", "Clare Hall", "Crowne Plaza Hotel",
        "Express by Holiday Inn", "Rainbow Vegetarian Cafe",
        "Raja Indian Cuisine", "Ranch", "The Bakers", "The Portland Arms",
        "The Six Bells", "The Sorrento", "Yippee Noodle Bar"}},
  };
  g.fallback_templates = {"is a place to visit", "is worth a visit"};
  g.validate();
  return g;
}

SyntheticGrammar parse_grammar_json(std::string_view text,
                                    const AttributeSchema& schema) {
  const json j = detail::parse_json(std::string(text), "grammar");
  SyntheticGrammar g;
  g.schema = schema;
  try {
    for (const auto& [key, _] : j.items()) {
      if (key != "presence" && key != "omission_rate" && key != "templates" &&
          key != "boolean_templates" && key != "surface_values" &&
          key != "fallback_templates" && key != "subject_attribute") {
        throw_invalid_argument("unknown grammar key '" + key + "'");
      }
    }
    g.presence = j.at("presence").get<std::map<std::string, double>>();
    g.omission_rate = j.at("omission_rate").get<double>();
    g.templates =
        j.at("templates").get<std::map<std::string, std::vector<std::string>>>();
    g.boolean_templates =
        j.at("boolean_templates")
            .get<std::map<std::string,
                          std::map<std::string, std::vector<std::string>>>>();
    g.surface_values = j.at("surface_values")
                           .get<std::map<std::string, std::vector<std::string>>>();
    g.fallback_templates =
        j.at("fallback_templates").get<std::vector<std::string>>();
    g.subject_attribute = j.value("subject_attribute", "name");
  } catch (const json::exception& e) {
    throw_invalid_argument(std::string("invalid grammar: ") + e.what());
  }
  g.validate();
  return g;
}

SyntheticGrammar load_grammar(const std::filesystem::path& path,
                              const AttributeSchema& schema) {
  return parse_grammar_json(detail::read_file(path), schema);
}

std::string grammar_to_json(const SyntheticGrammar& g) {
  json j = {{"presence", g.presence},
            {"omission_rate", g.omission_rate},
            {"templates", g.templates},
            {"boolean_templates", g.boolean_templates},
            {"surface_values", g.surface_values},
            {"fallback_templates", g.fallback_templates},
            {"subject_attribute", g.subject_attribute}};
  return detail::dump(j);
}

namespace {

std::string fill(const std::string& tmpl, const std::string& value) {
  std::string out = tmpl;
  const auto pos = out.find("{v}");
  if (pos != std::string::npos) out.replace(pos, 3, value);
  return out;
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.index(v.size())];
}

}  // namespace

std::vector<CorpusRecord> generate_corpus(const SyntheticGrammar& grammar,
                                          std::size_t n, std::uint64_t seed) {
  grammar.validate();
  Rng rng(seed);
  std::vector<CorpusRecord> out;
  out.reserve(n);
  const Attribute& subject = *grammar.schema.find(grammar.subject_attribute);

  auto draw_value = [&](const Attribute& a) {
    if (a.kind == AttributeKind::kDelexicalized) {
      return pick(rng, grammar.surface_values.at(a.name));
    }
    return pick(rng, a.values);
  };

  for (std::size_t i = 0; i < n; ++i) {
    CorpusRecord rec;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%06zu", i);
    rec.id = id;

    const std::string subject_value = draw_value(subject);
    rec.mr.assignments[subject.name] = subject_value;
    std::vector<std::string> clauses;
    for (const auto& a : grammar.schema.attributes()) {
      if (a.name == subject.name) continue;
      if (!rng.bernoulli(grammar.presence.at(a.name))) continue;
      const std::string value = draw_value(a);
      rec.mr.assignments[a.name] = value;
      const bool dropped = rng.bernoulli(grammar.omission_rate);
      const auto& ts = a.kind == AttributeKind::kBoolean
                           ? grammar.boolean_templates.at(a.name).at(value)
                           : grammar.templates.at(a.name);
      const std::string clause = fill(pick(rng, ts), value);
      if (!dropped) clauses.push_back(clause);
    }
    rng.shuffle(clauses);
    if (clauses.empty()) clauses.push_back(pick(rng, grammar.fallback_templates));

    std::string ref = fill(pick(rng, grammar.templates.at(subject.name)),
                           subject_value);
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      if (c == 0) {
        ref += " ";
      } else if (c + 1 == clauses.size()) {
        ref += " and ";
      } else {
        ref += ", ";
      }
      ref += clauses[c];
    }
    ref += ".";
    rec.reference = std::move(ref);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace prag

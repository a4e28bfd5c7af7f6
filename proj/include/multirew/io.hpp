#pragma once

#include <json.hpp>

#include <string>

#include "multirew/model.hpp"

namespace multirew {

namespace detail {

inline Rational rational_from_json(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_integer())
        return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    throw parse_error("expected integer or \"p/q\" string for " + where);
}

}  // namespace detail

// Model file format: a JSON document with
//   states:      array of { name, reward }
//   transitions: array of { from, action, to: array of { target, prob } }
//   initial:     state name
// Rationals are integers or "p/q" strings; decimals are rejected so that
// every quantity is represented exactly.
inline Model parse_model(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("model syntax error: ") + e.what());
    }
    if (!doc.is_object())
        throw parse_error("model document must be an object");
    if (!doc.contains("states") || !doc["states"].is_array())
        throw parse_error("missing \"states\" array");
    if (!doc.contains("transitions") || !doc["transitions"].is_array())
        throw parse_error("missing \"transitions\" array");
    if (!doc.contains("initial"))
        throw parse_error("missing \"initial\" state");

    Model m;
    for (const auto& js : doc["states"]) {
        if (!js.is_object() || !js.contains("name") || !js.contains("reward"))
            throw parse_error("each state needs \"name\" and \"reward\"");
        State st;
        st.name = js["name"].get<std::string>();
        st.reward = detail::rational_from_json(js["reward"], "reward of " + st.name);
        if (sgn(st.reward) < 0)
            throw parse_error("negative reward at state " + st.name);
        m.states.push_back(std::move(st));
    }

    for (const auto& jt : doc["transitions"]) {
        if (!jt.is_object() || !jt.contains("from") || !jt.contains("action") ||
            !jt.contains("to") || !jt["to"].is_array())
            throw parse_error("each transition needs \"from\", \"action\" and \"to\"");
        std::string from = jt["from"].get<std::string>();
        int s = m.find_state(from);
        if (s < 0)
            throw parse_error("transition from unknown state " + from);
        Action a;
        a.name = jt["action"].get<std::string>();
        for (const auto& je : jt["to"]) {
            if (!je.is_object() || !je.contains("target") || !je.contains("prob"))
                throw parse_error("each branch needs \"target\" and \"prob\"");
            std::string target = je["target"].get<std::string>();
            int t = m.find_state(target);
            if (t < 0)
                throw parse_error("transition to unknown state " + target);
            Rational p = detail::rational_from_json(je["prob"], "probability " + from + "->" + target);
            a.successors.emplace_back(t, p);
        }
        m.states[s].actions.push_back(std::move(a));
    }

    std::string initial = doc["initial"].get<std::string>();
    m.initial = m.find_state(initial);
    if (m.initial < 0)
        throw parse_error("unknown initial state " + initial);

    m.validate();

    // Standing assumption: every state is reachable from the initial state.
    auto seen = detail::reachable_from(m, m.initial);
    bool all = true;
    for (char c : seen) all = all && c;
    if (!all) m = detail::restrict_states(m, seen);
    return m;
}

inline std::string serialize_model(const Model& m) {
    nlohmann::ordered_json doc;
    doc["states"] = nlohmann::ordered_json::array();
    for (const State& st : m.states) {
        nlohmann::ordered_json js;
        js["name"] = st.name;
        js["reward"] = format_rational(st.reward);
        doc["states"].push_back(js);
    }
    doc["transitions"] = nlohmann::ordered_json::array();
    for (const State& st : m.states) {
        for (const Action& a : st.actions) {
            nlohmann::ordered_json jt;
            jt["from"] = st.name;
            jt["action"] = a.name;
            jt["to"] = nlohmann::ordered_json::array();
            for (const auto& [t, p] : a.successors) {
                nlohmann::ordered_json je;
                je["target"] = m.states[t].name;
                je["prob"] = format_rational(p);
                jt["to"].push_back(je);
            }
            doc["transitions"].push_back(jt);
        }
    }
    doc["initial"] = m.states[m.initial].name;
    return doc.dump(2);
}

}  // namespace multirew

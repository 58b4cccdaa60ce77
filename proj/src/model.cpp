#include "tourguide/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tourguide {

namespace {

std::string node_name(int site, bool is_end) {
  if (site == 0) return is_end ? "e" : "s";
  return std::to_string(site);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

int TourModel::var(std::string_view name) const {
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (vars[k].name == name) return static_cast<int>(k);
  return -1;
}

std::size_t TourModel::count_vars(VarType type) const {
  return static_cast<std::size_t>(std::count_if(vars.begin(), vars.end(), [&](const ModelVar& v) { return v.type == type; }));
}

std::size_t TourModel::count_prefix(std::string_view prefix) const {
  return static_cast<std::size_t>(std::count_if(vars.begin(), vars.end(), [&](const ModelVar& v) {
    return std::string_view(v.name).substr(0, prefix.size()) == prefix;
  }));
}

std::size_t TourModel::count(std::string_view tag) const {
  return static_cast<std::size_t>(
      std::count_if(constraints.begin(), constraints.end(), [&](const LinearConstraint& c) { return c.tag == tag; }));
}

ModelCounts expected_model_counts(int n_sites, int n_sequence) {
  const std::size_t a = static_cast<std::size_t>(n_sites - 1);
  const std::size_t s = static_cast<std::size_t>(n_sequence);
  ModelCounts c;
  c.x = a * (a + 1);
  c.y = a;
  c.t = a + 2;
  c.eq2 = c.x + c.y;
  c.eq3 = a;
  c.eq4 = a;
  c.eq5 = a;
  c.link = a;
  c.depot = 2;
  c.start = 1;
  c.eq6 = 1;
  c.eq7 = c.x;
  c.eq8 = c.x;
  c.eq9 = 1;
  c.eq10 = s;
  c.eq11 = s;
  return c;
}

ModelCounts model_counts(const TourModel& m) {
  ModelCounts c;
  c.x = m.count_prefix("x_");
  c.y = m.count_prefix("y_");
  c.t = m.count_prefix("t_");
  c.eq2 = m.count_vars(VarType::Binary);
  c.eq3 = m.dwell_bounds.size();
  c.eq4 = m.count("Eq4_flow");
  c.eq5 = m.count("Eq5_at_most_once");
  c.link = m.count("Link_visit_flow");
  c.depot = m.count("Depot_start_out") + m.count("Depot_balance");
  c.start = m.count("Start_time");
  c.eq6 = m.count("Eq6_total_time");
  c.eq7 = m.count("Eq7_time_in");
  c.eq8 = m.count("Eq8_time_out");
  c.eq9 = m.count("Eq9_time_limit");
  c.eq10 = m.count("Eq10_sequence");
  c.eq11 = m.count("Eq11_sequence_order");
  return c;
}

TourModel build_model(const TourProblem& p) {
  check_problem(p);
  const int n = p.n_sites;
  TourModel m;
  struct Arc {
    int from;  // site id; 0 means virtual start
    int to;    // site id; 0 means virtual end
    int var;
  };
  std::vector<Arc> arcs;
  auto add_var = [&](std::string name, VarType type, double lb, double ub) {
    m.vars.push_back({std::move(name), type, lb, ub});
    return static_cast<int>(m.vars.size()) - 1;
  };
  for (int j = 1; j < n; ++j) arcs.push_back({0, j, add_var("x_s_" + std::to_string(j), VarType::Binary, 0, 1)});
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      if (i == j) continue;
      arcs.push_back({i, j, add_var("x_" + std::to_string(i) + "_" + std::to_string(j), VarType::Binary, 0, 1)});
    }
    arcs.push_back({i, 0, add_var("x_" + std::to_string(i) + "_e", VarType::Binary, 0, 1)});
  }
  std::vector<int> y(n, -1);
  for (int i = 1; i < n; ++i) y[i] = add_var("y_" + std::to_string(i), VarType::Binary, 0, 1);
  const int t_s = add_var("t_s", VarType::Continuous, 0, p.t_big);
  std::vector<int> t(n, -1);
  for (int i = 1; i < n; ++i) t[i] = add_var("t_" + std::to_string(i), VarType::Continuous, 0, p.t_big);
  const int t_e = add_var("t_e", VarType::Continuous, 0, p.t_big);
  const int big_t = add_var("T", VarType::Continuous, 0, p.t_big);

  const std::vector<int> demand = p.site_demand();
  for (int i = 1; i < n; ++i) {
    const double c = p.w_d * demand[i];
    if (c == 0.0) continue;
    m.objective_constant += c;
    m.objective.emplace_back(y[i], -c);
  }
  m.objective.emplace_back(big_t, p.w_t);
  for (int i = 1; i < n; ++i) m.dwell_bounds.emplace_back(i, p.dwell[i]);

  auto row = [&](std::string tag, std::string name, std::vector<std::pair<int, double>> terms, Sense sense, double rhs) {
    m.constraints.push_back({std::move(tag), std::move(name), std::move(terms), sense, rhs});
  };
  for (int k = 1; k < n; ++k) {
    std::vector<std::pair<int, double>> flow, in;
    for (const Arc& a : arcs) {
      if (a.to == k) {
        flow.emplace_back(a.var, 1.0);
        in.emplace_back(a.var, 1.0);
      }
      if (a.from == k) flow.emplace_back(a.var, -1.0);
    }
    const std::string ks = std::to_string(k);
    row("Eq4_flow", "Eq4_flow_" + ks, flow, Sense::Equal, 0.0);
    row("Eq5_at_most_once", "Eq5_at_most_once_" + ks, in, Sense::LessEq, 1.0);
    auto link = in;
    for (auto& term : link) term.second = -1.0;
    link.insert(link.begin(), {y[k], 1.0});
    row("Link_visit_flow", "Link_visit_flow_" + ks, link, Sense::Equal, 0.0);
  }
  std::vector<std::pair<int, double>> start_out, balance;
  for (const Arc& a : arcs) {
    if (a.from == 0) {
      start_out.emplace_back(a.var, 1.0);
      balance.emplace_back(a.var, 1.0);
    }
  }
  for (const Arc& a : arcs)
    if (a.to == 0) balance.emplace_back(a.var, -1.0);
  row("Depot_start_out", "Depot_start_out", start_out, Sense::LessEq, 1.0);
  row("Depot_balance", "Depot_balance", balance, Sense::Equal, 0.0);
  row("Start_time", "Start_time", {{t_s, 1.0}}, Sense::Equal, 0.0);

  std::vector<std::pair<int, double>> total{{big_t, 1.0}};
  for (const Arc& a : arcs) total.emplace_back(a.var, -p.travel(a.from, a.to));
  for (int i = 1; i < n; ++i) total.emplace_back(y[i], -p.dwell[i]);
  row("Eq6_total_time", "Eq6_total_time", total, Sense::Equal, 0.0);

  for (const Arc& a : arcs) {
    const int ti = a.from == 0 ? t_s : t[a.from];
    const int tj = a.to == 0 ? t_e : t[a.to];
    const double c = p.travel(a.from, a.to) + p.dwell[a.from];
    const std::string suffix = node_name(a.from, false) + "_" + node_name(a.to, true);
    row("Eq7_time_in", "Eq7_time_in_" + suffix, {{ti, 1.0}, {tj, -1.0}, {a.var, p.t_big}}, Sense::LessEq,
        p.t_big - c);
    row("Eq8_time_out", "Eq8_time_out_" + suffix, {{ti, 1.0}, {tj, -1.0}, {a.var, -p.t_big}}, Sense::GreaterEq,
        -p.t_big - c);
  }
  row("Eq9_time_limit", "Eq9_time_limit", {{big_t, 1.0}}, Sense::LessEq, p.t_lim);
  for (const auto& [i, j] : p.sequence) {
    const std::string suffix = std::to_string(i) + "_" + std::to_string(j);
    row("Eq10_sequence", "Eq10_sequence_" + suffix, {{y[i], 1.0}, {y[j], -1.0}}, Sense::GreaterEq, 0.0);
    row("Eq11_sequence_order", "Eq11_sequence_order_" + suffix, {{t[i], 1.0}, {t[j], -1.0}, {y[i], p.t_big}},
        Sense::LessEq, p.t_big);
  }
  return m;
}

std::string dump_model(const TourModel& m, const TourProblem& p) {
  std::string out;
  out += "\\ tour model: " + std::to_string(p.n_sites) + " sites (depot split into s/e), " +
         std::to_string(p.demand.clients()) + " clients, " + std::to_string(p.sequence.size()) +
         " sequence pairs\n";
  out += "\\ w_d = " + num(p.w_d) + ", w_t = " + num(p.w_t) + ", T_lim = " + num(p.t_lim) + ", T_L = " +
         num(p.t_big) + "\n";
  out += "\\ Link_visit_flow rows are an addition linking y to x\n";
  out += "minimize\n  Eq1_objective:";
  const std::vector<int> demand = p.site_demand();
  for (int i = 1; i < p.n_sites; ++i) {
    if (demand[i] == 0) continue;
    out += " + " + num(p.w_d * demand[i]) + " (1 - y_" + std::to_string(i) + ")";
  }
  out += " + " + num(p.w_t) + " T\n";
  out += "subject to\n";
  for (const auto& c : m.constraints) {
    out += "  " + c.name + ":";
    bool first = true;
    for (const auto& [v, coef] : c.terms) {
      if (coef == 0.0) continue;
      const double mag = std::abs(coef);
      out += first ? (coef < 0 ? " -" : "") : (coef < 0 ? " -" : " +");
      out += (mag == 1.0 ? std::string(" ") : " " + num(mag) + " ") + m.vars[v].name;
      first = false;
    }
    if (first) out += " 0";
    out += c.sense == Sense::LessEq ? " <= " : c.sense == Sense::Equal ? " = " : " >= ";
    out += num(c.rhs) + "\n";
  }
  out += "bounds\n";
  for (const auto& [site, d] : m.dwell_bounds)
    out += "  Eq3_dwell_" + std::to_string(site) + ": T_" + std::to_string(site) + " = " + num(d) + " > 0\n";
  for (const auto& v : m.vars)
    if (v.type == VarType::Continuous) out += "  " + num(v.lb) + " <= " + v.name + " <= " + num(v.ub) + "\n";
  out += "binaries\n";
  for (const auto& v : m.vars)
    if (v.type == VarType::Binary) out += "  Eq2_binary: " + v.name + " in {0,1}\n";
  out += "end\n";
  return out;
}

std::vector<double> model_assignment(const TourModel& m, const TourProblem& p, const TourSolution& s) {
  std::vector<double> v(m.vars.size(), 0.0);
  const auto& order = s.visit_order;
  if (order.size() < 2 || order.front() != 0 || order.back() != 0)
    throw Error("visit order must start and end at the depot");
  auto set = [&](const std::string& name, double value) {
    const int k = m.var(name);
    if (k < 0) throw Error("solution uses arc or site '" + name + "' absent from the model");
    v[k] = value;
  };
  for (std::size_t k = 1; k + 1 < order.size(); ++k) {
    const std::string from = k == 1 ? "s" : std::to_string(order[k - 1]);
    set("x_" + from + "_" + std::to_string(order[k]), 1.0);
  }
  if (order.size() > 2) set("x_" + std::to_string(order[order.size() - 2]) + "_e", 1.0);
  for (int i = 1; i < p.n_sites; ++i) set("t_" + std::to_string(i), p.t_lim);
  for (std::size_t k = 1; k + 1 < order.size(); ++k) {
    set("y_" + std::to_string(order[k]), 1.0);
    set("t_" + std::to_string(order[k]), k < s.arrival.size() ? s.arrival[k] : 0.0);
  }
  set("t_s", 0.0);
  set("t_e", s.total_time);
  set("T", s.total_time);
  return v;
}

double model_objective(const TourModel& m, const std::vector<double>& values) {
  double obj = m.objective_constant;
  for (const auto& [k, c] : m.objective) obj += c * values[k];
  return obj;
}

std::vector<std::string> violated_rows(const TourModel& m, const std::vector<double>& values, double tol) {
  std::vector<std::string> out;
  for (const auto& c : m.constraints) {
    double lhs = 0.0;
    for (const auto& [k, coef] : c.terms) lhs += coef * values[k];
    const double slack = tol * std::max(1.0, std::abs(c.rhs));
    const bool ok = c.sense == Sense::LessEq   ? lhs <= c.rhs + slack
                    : c.sense == Sense::Equal  ? std::abs(lhs - c.rhs) <= slack
                                               : lhs >= c.rhs - slack;
    if (!ok) out.push_back(c.name);
  }
  for (std::size_t k = 0; k < m.vars.size(); ++k) {
    const auto& var = m.vars[k];
    if (var.type == VarType::Binary && values[k] != 0.0 && values[k] != 1.0) out.push_back("Eq2_binary_" + var.name);
  }
  return out;
}

}  // namespace tourguide

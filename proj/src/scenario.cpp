#include "tourguide/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace tourguide {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::string s = line;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double number(const std::string& tok, int line_no) {
  if (tok == "inf") return kUnreachable;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size())
    throw Error("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  return v;
}

int integer(const std::string& tok, int line_no) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (tok.empty() || end != tok.c_str() + tok.size())
    throw Error("line " + std::to_string(line_no) + ": bad integer '" + tok + "'");
  return static_cast<int>(v);
}

std::string g17(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TourProblem parse_scenario(std::string_view content, const std::filesystem::path& base_dir) {
  std::istringstream in{std::string(content)};
  std::string raw;
  std::string section;
  int line_no = 0;
  int n = -1;
  std::vector<double> matrix;
  int matrix_rows_pending = 0;
  std::vector<double> dwell;
  std::vector<int> rank;
  std::vector<std::vector<int>> clients;
  std::optional<double> tlim, wd, wt, tl;
  std::vector<std::pair<int, int>> seq;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto tok = tokens(raw);
    if (tok.empty()) continue;
    if (tok[0].front() == '[') {
      if (matrix_rows_pending > 0) throw Error("line " + std::to_string(line_no) + ": matrix is missing rows");
      section = tok[0];
      continue;
    }
    const std::string at = "line " + std::to_string(line_no) + ": ";
    if (section == "[sites]") {
      if (matrix_rows_pending > 0) {
        if (static_cast<int>(tok.size()) != n) throw Error(at + "matrix row needs " + std::to_string(n) + " entries");
        for (const auto& t : tok) matrix.push_back(number(t, line_no));
        --matrix_rows_pending;
      } else if (tok[0] == "n" && tok.size() == 2) {
        n = integer(tok[1], line_no);
        if (n < 1) throw Error(at + "site count must be at least 1");
      } else if (tok[0] == "matrix" && tok.size() == 1) {
        if (n < 1) throw Error(at + "'n' must precede the matrix");
        matrix.clear();
        matrix_rows_pending = n;
      } else if (tok[0] == "matrix_file" && tok.size() == 2) {
        std::filesystem::path path(tok[1]);
        if (path.is_relative()) path = base_dir / path;
        const TravelTimeMatrix m = parse_matrix(read_text_file(path));
        if (n >= 1 && m.n != n) throw Error(at + "matrix file size differs from n");
        n = m.n;
        matrix = m.seconds;
      } else if (tok[0] == "dwell") {
        dwell.clear();
        for (std::size_t k = 1; k < tok.size(); ++k) dwell.push_back(number(tok[k], line_no));
      } else if (tok[0] == "rank") {
        rank.clear();
        for (std::size_t k = 1; k < tok.size(); ++k) rank.push_back(integer(tok[k], line_no));
      } else {
        throw Error(at + "unknown [sites] entry '" + tok[0] + "'");
      }
    } else if (section == "[demand]") {
      std::vector<int> ids;
      for (const auto& t : tok) ids.push_back(integer(t, line_no));
      clients.push_back(std::move(ids));
    } else if (section == "[constraints]") {
      if (tok[0] == "tlim" && tok.size() == 2) {
        tlim = number(tok[1], line_no);
      } else if (tok[0] == "seq" && tok.size() == 3) {
        seq.emplace_back(integer(tok[1], line_no), integer(tok[2], line_no));
      } else {
        throw Error(at + "unknown [constraints] entry '" + tok[0] + "'");
      }
    } else if (section == "[weights]") {
      if (tok.size() != 2) throw Error(at + "weights take one value");
      const double v = number(tok[1], line_no);
      if (tok[0] == "wd") wd = v;
      else if (tok[0] == "wt") wt = v;
      else if (tok[0] == "TL") tl = v;
      else throw Error(at + "unknown weight '" + tok[0] + "'");
    } else {
      throw Error(at + "entry outside a known section");
    }
  }
  if (matrix_rows_pending > 0) throw Error("matrix is missing rows");
  if (n < 1 || matrix.size() != static_cast<std::size_t>(n) * n) throw Error("scenario needs n and an n x n matrix");
  if (static_cast<int>(dwell.size()) != n - 1) throw Error("scenario needs n-1 dwell values");
  if (!tlim) throw Error("scenario needs a time limit (tlim)");

  DemandMatrix demand(static_cast<int>(clients.size()), n - 1);
  for (std::size_t l = 0; l < clients.size(); ++l) {
    for (int id : clients[l]) {
      if (id < 1 || id >= n) throw Error("demanded site " + std::to_string(id) + " out of range");
      demand.set(static_cast<int>(l), id - 1);
    }
  }
  TravelTimeMatrix m;
  m.n = n;
  m.seconds = std::move(matrix);
  TourProblem p = make_problem(m, dwell, std::move(demand), *tlim, std::move(seq), std::move(rank));
  if (wd) p.w_d = *wd;
  if (wt) p.w_t = *wt;
  p.t_big = tl ? *tl : default_big_m(p);
  check_problem(p);
  return p;
}

TourProblem load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text_file(path), path.parent_path());
}

std::string format_scenario(const TourProblem& p) {
  std::string out = "[sites]\nn " + std::to_string(p.n_sites) + "\nmatrix\n";
  for (int i = 0; i < p.n_sites; ++i) {
    for (int j = 0; j < p.n_sites; ++j) out += (j ? " " : "") + g17(p.travel(i, j));
    out += "\n";
  }
  out += "dwell";
  for (int i = 1; i < p.n_sites; ++i) out += " " + g17(p.dwell[i]);
  out += "\n";
  if (!p.popularity_rank.empty()) {
    out += "rank";
    for (int r : p.popularity_rank) out += " " + std::to_string(r);
    out += "\n";
  }
  out += "\n[demand]\n";
  for (int l = 0; l < p.demand.clients(); ++l) {
    bool first = true;
    for (int i : p.demand.requests(l)) {
      out += (first ? "" : " ") + std::to_string(i + 1);
      first = false;
    }
    out += "\n";
  }
  out += "\n[constraints]\ntlim " + g17(p.t_lim) + "\n";
  for (const auto& [i, j] : p.sequence) out += "seq " + std::to_string(i) + " " + std::to_string(j) + "\n";
  out += "\n[weights]\nwd " + g17(p.w_d) + "\nwt " + g17(p.w_t) + "\nTL " + g17(p.t_big) + "\n";
  return out;
}

std::string format_solution(const TourSolution& s, std::string_view planner, const SolverReport* report) {
  std::string out = "planner " + std::string(planner) + "\nvisit";
  for (int v : s.visit_order) out += " " + std::to_string(v);
  out += "\narrival";
  for (double t : s.arrival) out += " " + g17(t);
  out += "\nvisited";
  for (auto y : s.visited) out += " " + std::to_string(static_cast<int>(y));
  out += "\ntotal_time " + g17(s.total_time) + "\ndropped_total " + std::to_string(s.dropped) + "\n";
  for (std::size_t l = 0; l < s.dropped_per_client.size(); ++l)
    out += "client " + std::to_string(l) + " dropped " + std::to_string(s.dropped_per_client[l]) + "\n";
  out += "objective " + g17(s.objective) + "\n";
  if (report) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "nodes_explored %zu\nbound_prunings %zu\ndominance_prunings %zu\ncandidate_sites %d\n"
                  "proven_optimal %d\n",
                  report->nodes_explored, report->bound_prunings, report->dominance_prunings,
                  report->candidate_sites, report->proven_optimal ? 1 : 0);
    out += buf;
  }
  return out;
}

TourSolution parse_solution(std::string_view content) {
  TourSolution s;
  s.visit_order.clear();
  std::istringstream in{std::string(content)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto tok = tokens(raw);
    if (tok.empty() || tok[0].front() == '#') continue;
    const std::string& key = tok[0];
    if (key == "visit") {
      for (std::size_t k = 1; k < tok.size(); ++k) s.visit_order.push_back(integer(tok[k], line_no));
    } else if (key == "arrival") {
      for (std::size_t k = 1; k < tok.size(); ++k) s.arrival.push_back(number(tok[k], line_no));
    } else if (key == "visited") {
      for (std::size_t k = 1; k < tok.size(); ++k)
        s.visited.push_back(static_cast<std::uint8_t>(integer(tok[k], line_no)));
    } else if (key == "total_time" && tok.size() == 2) {
      s.total_time = number(tok[1], line_no);
    } else if (key == "dropped_total" && tok.size() == 2) {
      s.dropped = integer(tok[1], line_no);
    } else if (key == "client" && tok.size() == 4) {
      const int l = integer(tok[1], line_no);
      if (l != static_cast<int>(s.dropped_per_client.size()))
        throw Error("line " + std::to_string(line_no) + ": clients must be listed in order");
      s.dropped_per_client.push_back(integer(tok[3], line_no));
    } else if (key == "objective" && tok.size() == 2) {
      s.objective = number(tok[1], line_no);
    }
  }
  return s;
}

}  // namespace tourguide

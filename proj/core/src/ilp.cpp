#include "hetcache/ilp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hetcache {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string vx(int u, int f) {
  return "x_u" + std::to_string(u) + "_f" + std::to_string(f);
}
std::string vc(int ord, int f) {
  return "c_n" + std::to_string(ord) + "_f" + std::to_string(f);
}
std::string vr(int u, int w) {
  return "r_u" + std::to_string(u) + "_w" + std::to_string(w);
}
std::string vphi(int ord, int f) {
  return "phi_n" + std::to_string(ord) + "_f" + std::to_string(f);
}
std::string vphix(int x, int ord, int f) {
  return "phix_x" + std::to_string(x) + "_n" + std::to_string(ord) + "_f" +
         std::to_string(f);
}
std::string vrho(int u, int upto, int w) {
  return "rho_u" + std::to_string(u) + "_v" + std::to_string(upto) + "_w" +
         std::to_string(w);
}
std::string vrr(int a, int b, int w) {
  if (a > b) std::swap(a, b);
  return "rr_u" + std::to_string(a) + "_v" + std::to_string(b) + "_w" +
         std::to_string(w);
}
std::string vomg(int u, int w, int f) {
  return "omg_u" + std::to_string(u) + "_w" + std::to_string(w) + "_f" +
         std::to_string(f);
}
std::string vomgx(int u, int w, int f, int x) {
  return "omgx_u" + std::to_string(u) + "_w" + std::to_string(w) + "_f" +
         std::to_string(f) + "_x" + std::to_string(x);
}
std::string vgam(int u, int up, int w, int f) {
  return "gam_u" + std::to_string(u) + "_v" + std::to_string(up) + "_w" +
         std::to_string(w) + "_f" + std::to_string(f);
}
std::string vgamx(int u, int up, int w, int f, int x) {
  return "gamx_u" + std::to_string(u) + "_v" + std::to_string(up) + "_w" +
         std::to_string(w) + "_f" + std::to_string(f) + "_x" +
         std::to_string(x);
}
std::string vlam(int u, int up, int w, int f, int g, int y) {
  return "lam_u" + std::to_string(u) + "_v" + std::to_string(up) + "_w" +
         std::to_string(w) + "_f" + std::to_string(f) + "_g" +
         std::to_string(g) + "_y" + std::to_string(y);
}
std::string vlamxy(int u, int up, int w, int f, int g, int x, int y) {
  return "lamxy_u" + std::to_string(u) + "_v" + std::to_string(up) + "_w" +
         std::to_string(w) + "_f" + std::to_string(f) + "_g" +
         std::to_string(g) + "_x" + std::to_string(x) + "_y" +
         std::to_string(y);
}

// Writes one constraint row, wrapping long expressions.
class LpWriter {
 public:
  explicit LpWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text) { out_ << "\\ " << text << "\n"; }
  void section(const std::string& name) { out_ << name << "\n"; }

  void expression_open(const std::string& name) {
    line_ = " " + name + ":";
    first_term_ = true;
  }
  void term(double coef, const std::string& var) {
    std::string tok;
    if (coef >= 0.0)
      tok = (first_term_ ? std::string() : std::string("+ ")) + num(coef) +
            " " + var;
    else
      tok = "- " + num(-coef) + " " + var;
    first_term_ = false;
    if (line_.size() + tok.size() + 1 > 200) {
      out_ << line_ << "\n";
      line_ = "   ";
    }
    line_ += " " + tok;
  }
  void close_objective() {
    out_ << line_ << "\n";
    line_.clear();
  }
  void close_constraint(char sense, double rhs) {
    std::string op = sense == '<' ? "<=" : sense == '>' ? ">=" : "=";
    out_ << line_ << " " << op << " " << num(rhs) << "\n";
    line_.clear();
  }

  void bound_unit(const std::string& var) {
    out_ << " 0 <= " << var << " <= 1\n";
  }
  void binary(const std::string& var) { out_ << " " << var << "\n"; }

 private:
  std::ostream& out_;
  std::string line_;
  bool first_term_ = true;
};

struct ProductTriple {
  std::string product;
  // product = a * b with a, b in [0,1]; b may be an affine literal 1 - var
  std::string a;
  std::string b;
  bool b_complemented = false;
};

}  // namespace

std::uint64_t ilp_variable_count(const NetworkInstance& instance) {
  auto u64 = [](int v) { return static_cast<std::uint64_t>(v); };
  std::uint64_t n = u64(instance.num_nodes());
  std::uint64_t u = u64(instance.num_ues());
  std::uint64_t f = u64(instance.params().file_count);
  std::uint64_t w = u64(instance.params().num_channels);
  std::uint64_t total = 0;
  total += u * f;              // x
  total += n * f;              // c
  total += u * w;              // r
  total += n * f;              // phi chains
  total += n * n * f;          // phix chains
  total += u * u * w;          // rho chains
  total += u * (u - 1) / 2 * w;  // rr pairs
  total += u * w * f;          // omg
  total += u * w * f * (n - 1);  // omgx
  total += u * (u - 1) * w * f;  // gam
  total += u * (u - 1) * w * f * (n - 2);  // gamx
  if (n >= 3) total += u * (u - 1) * w * f * (f - 1) * (n - 3);  // lam
  if (n >= 3)
    total += u * (u - 1) * w * f * (f - 1) * (n - 2) * (n - 3);  // lamxy
  return total;
}

IlpStats emit_ilp(const NetworkInstance& instance,
                  const PopularityModel& popularity,
                  const DelayBoundTable& bounds, const std::string& path,
                  const IlpOptions& options) {
  std::uint64_t estimate = ilp_variable_count(instance);
  if (estimate > options.max_variables)
    throw IlpSizeExceeded(estimate, options.max_variables);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_ilp: cannot write " + path);

  const int n_nodes = instance.num_nodes();
  const int n_users = instance.num_ues();
  const int n_files = instance.params().file_count;
  const int n_chans = instance.params().num_channels;
  const double d_th = instance.params().delay_threshold_slots;
  const double t0 = instance.params().backhaul_delay_slots;

  IlpStats stats;
  stats.variables = estimate;

  LpWriter lp(out);
  lp.comment("hetcache linearized delivery-rate program, LP format");
  lp.comment("instance: U=" + std::to_string(n_users) +
             " S=" + std::to_string(instance.num_sbs()) +
             " F=" + std::to_string(n_files) + " W=" + std::to_string(n_chans) +
             " seed=" + std::to_string(instance.seed()));
  lp.comment(
      "nodes: n0 = macro station, n1..nS = small stations, then user caches");
  lp.comment(
      "binaries: x (delivery), c (caching), r (channels); product variables "
      "are relaxed to [0,1] and pinned by their linking rows");

  lp.section("Maximize");
  lp.expression_open("obj");
  double inv_users = 1.0 / static_cast<double>(n_users);
  for (int u = 1; u <= n_users; ++u)
    for (int f = 1; f <= n_files; ++f)
      lp.term(popularity.averaged_popularity(u, f) * inv_users, vx(u, f));
  lp.close_objective();

  lp.section("Subject To");

  auto g_mbs = [&](int user, int y_ord) -> double {
    return bounds.link_bound(
        mbs_node(), ue_node(user),
        y_ord < 0 ? std::nullopt
                  : std::optional<NodeId>(instance.node_at(y_ord)));
  };
  auto g_link = [&](int x_ord, int user, int y_ord) -> double {
    return bounds.link_bound(
        instance.node_at(x_ord), ue_node(user),
        y_ord < 0 ? std::nullopt
                  : std::optional<NodeId>(instance.node_at(y_ord)));
  };

  // delay rows: G_{u,f} + bigG * x_{u,f} <= D_th + bigG, with bigG the sum
  // of the row's (all non-negative) delay coefficients.
  for (int u = 1; u <= n_users; ++u) {
    int u_ord = instance.ordinal_of(ue_node(u));
    for (int f = 1; f <= n_files; ++f) {
      std::vector<std::pair<double, std::string>> terms;
      double big_g = 0.0;
      auto add = [&](double coef, const std::string& var) {
        terms.emplace_back(coef, var);
        big_g += coef;
      };

      add(t0, vphi(n_nodes - 1, f));
      for (int w = 1; w <= n_chans; ++w)
        add(g_mbs(u, -1), vomg(u, w, f));
      for (int w = 1; w <= n_chans; ++w)
        for (int x = 0; x < n_nodes; ++x) {
          if (x == u_ord) continue;
          add(g_link(x, u, -1), vomgx(u, w, f, x));
        }
      for (int w = 1; w <= n_chans; ++w)
        for (int up = 1; up <= n_users; ++up) {
          if (up == u) continue;
          int up_ord = instance.ordinal_of(ue_node(up));
          for (int g = 1; g <= n_files; ++g) {
            if (g == f) continue;
            double q = popularity.averaged_popularity(up, g);
            for (int y = 1; y < n_nodes; ++y) {  // y in C \ {u, u', m}
              if (y == u_ord || y == up_ord) continue;
              add(q * g_mbs(u, y), vlam(u, up, w, f, g, y));
            }
            for (int x = 0; x < n_nodes; ++x) {
              if (x == u_ord || x == up_ord) continue;
              for (int y = 0; y < n_nodes; ++y) {
                if (y == u_ord || y == up_ord || y == x) continue;
                add(q * g_link(x, u, y), vlamxy(u, up, w, f, g, x, y));
              }
            }
          }
        }

      lp.expression_open("delay_u" + std::to_string(u) + "_f" +
                         std::to_string(f));
      for (const auto& [coef, var] : terms) lp.term(coef, var);
      lp.term(big_g, vx(u, f));
      lp.close_constraint('<', d_th + big_g);
      ++stats.constraints;
    }
  }

  // capacity and redundancy
  for (int ord = 0; ord < n_nodes; ++ord) {
    lp.expression_open("cap_n" + std::to_string(ord));
    for (int f = 1; f <= n_files; ++f) lp.term(1.0, vc(ord, f));
    lp.close_constraint(
        '<', static_cast<double>(instance.cache_slots(instance.node_at(ord))));
    ++stats.constraints;
  }
  for (int f = 1; f <= n_files; ++f) {
    lp.expression_open("red_f" + std::to_string(f));
    for (int ord = 0; ord < n_nodes; ++ord) lp.term(1.0, vc(ord, f));
    lp.close_constraint('<', 1.0);
    ++stats.constraints;
  }

  // channel allocation
  for (int u = 1; u <= n_users; ++u) {
    lp.expression_open("chan_u" + std::to_string(u));
    for (int w = 1; w <= n_chans; ++w) lp.term(1.0, vr(u, w));
    lp.close_constraint('=', 1.0);
    ++stats.constraints;
  }
  for (int w = 1; w <= n_chans; ++w) {
    lp.expression_open("reuse_w" + std::to_string(w));
    for (int u = 1; u <= n_users; ++u) lp.term(1.0, vr(u, w));
    lp.close_constraint('<', static_cast<double>(instance.reuse_limit()));
    ++stats.constraints;
  }

  // equality rows for the chain bases: var = lit or var = 1 - lit
  auto chain_base = [&](const std::string& name, const std::string& var,
                        const std::string& lit, bool complemented) {
    lp.expression_open(name);
    lp.term(1.0, var);
    if (complemented) {
      lp.term(1.0, lit);
      lp.close_constraint('=', 1.0);
    } else {
      lp.term(-1.0, lit);
      lp.close_constraint('=', 0.0);
    }
    ++stats.constraints;
  };
  // product rows: prod <= prev; prod <= lit (or 1 - lit); prod >= prev + lit - 1
  auto chain_link = [&](const std::string& name, const std::string& prod,
                        const std::string& prev, const std::string& lit,
                        bool complemented) {
    lp.expression_open(name + "_a");
    lp.term(1.0, prod);
    lp.term(-1.0, prev);
    lp.close_constraint('<', 0.0);
    lp.expression_open(name + "_b");
    lp.term(1.0, prod);
    if (complemented) {
      lp.term(1.0, lit);
      lp.close_constraint('<', 1.0);
    } else {
      lp.term(-1.0, lit);
      lp.close_constraint('<', 0.0);
    }
    lp.expression_open(name + "_c");
    lp.term(1.0, prod);
    lp.term(-1.0, prev);
    if (complemented) {
      lp.term(1.0, lit);
      lp.close_constraint('>', 0.0);
    } else {
      lp.term(-1.0, lit);
      lp.close_constraint('>', -1.0);
    }
    stats.constraints += 3;
  };

  // phi chains
  for (int f = 1; f <= n_files; ++f) {
    chain_base("phib_f" + std::to_string(f), vphi(0, f), vc(0, f), true);
    for (int ord = 1; ord < n_nodes; ++ord)
      chain_link("phil_n" + std::to_string(ord) + "_f" + std::to_string(f),
                 vphi(ord, f), vphi(ord - 1, f), vc(ord, f), true);
  }
  // phix chains
  for (int x = 0; x < n_nodes; ++x)
    for (int f = 1; f <= n_files; ++f) {
      chain_base(
          "phixb_x" + std::to_string(x) + "_f" + std::to_string(f),
          vphix(x, 0, f), vc(0, f), x != 0);
      for (int ord = 1; ord < n_nodes; ++ord)
        chain_link("phixl_x" + std::to_string(x) + "_n" + std::to_string(ord) +
                       "_f" + std::to_string(f),
                   vphix(x, ord, f), vphix(x, ord - 1, f), vc(ord, f),
                   ord != x);
    }
  // rho chains: delta_{u',w} is r_{u,w} at u' = u, else 1 - r_{u',w}
  for (int u = 1; u <= n_users; ++u)
    for (int w = 1; w <= n_chans; ++w) {
      chain_base("rhob_u" + std::to_string(u) + "_w" + std::to_string(w),
                 vrho(u, 1, w), vr(1, w), u != 1);
      for (int up = 2; up <= n_users; ++up)
        chain_link("rhol_u" + std::to_string(u) + "_v" + std::to_string(up) +
                       "_w" + std::to_string(w),
                   vrho(u, up, w), vrho(u, up - 1, w), vr(up, w), up != u);
    }
  // rr pair products
  for (int w = 1; w <= n_chans; ++w)
    for (int a = 1; a <= n_users; ++a)
      for (int b = a + 1; b <= n_users; ++b)
        chain_link("rrl_u" + std::to_string(a) + "_v" + std::to_string(b) +
                       "_w" + std::to_string(w),
                   vrr(a, b, w), vr(a, w), vr(b, w), false);
  // omg / omgx products
  for (int u = 1; u <= n_users; ++u)
    for (int w = 1; w <= n_chans; ++w)
      for (int f = 1; f <= n_files; ++f) {
        chain_link("omgl_u" + std::to_string(u) + "_w" + std::to_string(w) +
                       "_f" + std::to_string(f),
                   vomg(u, w, f), vrho(u, n_users, w), vphi(n_nodes - 1, f),
                   false);
        int u_ord = instance.ordinal_of(ue_node(u));
        for (int x = 0; x < n_nodes; ++x) {
          if (x == u_ord) continue;
          chain_link("omgxl_u" + std::to_string(u) + "_w" + std::to_string(w) +
                         "_f" + std::to_string(f) + "_x" + std::to_string(x),
                     vomgx(u, w, f, x), vrho(u, n_users, w),
                     vphix(x, n_nodes - 1, f), false);
        }
      }
  // gam / gamx products
  for (int u = 1; u <= n_users; ++u) {
    int u_ord = instance.ordinal_of(ue_node(u));
    for (int up = 1; up <= n_users; ++up) {
      if (up == u) continue;
      int up_ord = instance.ordinal_of(ue_node(up));
      for (int w = 1; w <= n_chans; ++w)
        for (int f = 1; f <= n_files; ++f) {
          chain_link("gaml_u" + std::to_string(u) + "_v" + std::to_string(up) +
                         "_w" + std::to_string(w) + "_f" + std::to_string(f),
                     vgam(u, up, w, f), vrr(u, up, w), vphi(n_nodes - 1, f),
                     false);
          for (int x = 0; x < n_nodes; ++x) {
            if (x == u_ord || x == up_ord) continue;
            chain_link("gamxl_u" + std::to_string(u) + "_v" +
                           std::to_string(up) + "_w" + std::to_string(w) +
                           "_f" + std::to_string(f) + "_x" + std::to_string(x),
                       vgamx(u, up, w, f, x), vrr(u, up, w),
                       vphix(x, n_nodes - 1, f), false);
          }
        }
    }
  }
  // lam / lamxy products
  for (int u = 1; u <= n_users; ++u) {
    int u_ord = instance.ordinal_of(ue_node(u));
    for (int up = 1; up <= n_users; ++up) {
      if (up == u) continue;
      int up_ord = instance.ordinal_of(ue_node(up));
      for (int w = 1; w <= n_chans; ++w)
        for (int f = 1; f <= n_files; ++f)
          for (int g = 1; g <= n_files; ++g) {
            if (g == f) continue;
            for (int y = 1; y < n_nodes; ++y) {
              if (y == u_ord || y == up_ord) continue;
              chain_link("laml_u" + std::to_string(u) + "_v" +
                             std::to_string(up) + "_w" + std::to_string(w) +
                             "_f" + std::to_string(f) + "_g" +
                             std::to_string(g) + "_y" + std::to_string(y),
                         vlam(u, up, w, f, g, y), vgam(u, up, w, f),
                         vphix(y, n_nodes - 1, g), false);
            }
            for (int x = 0; x < n_nodes; ++x) {
              if (x == u_ord || x == up_ord) continue;
              for (int y = 0; y < n_nodes; ++y) {
                if (y == u_ord || y == up_ord || y == x) continue;
                chain_link("lamxyl_u" + std::to_string(u) + "_v" +
                               std::to_string(up) + "_w" + std::to_string(w) +
                               "_f" + std::to_string(f) + "_g" +
                               std::to_string(g) + "_x" + std::to_string(x) +
                               "_y" + std::to_string(y),
                           vlamxy(u, up, w, f, g, x, y), vgamx(u, up, w, f, x),
                           vphix(y, n_nodes - 1, g), false);
              }
            }
          }
    }
  }

  lp.section("Bounds");
  for (int f = 1; f <= n_files; ++f)
    for (int ord = 0; ord < n_nodes; ++ord) lp.bound_unit(vphi(ord, f));
  for (int x = 0; x < n_nodes; ++x)
    for (int f = 1; f <= n_files; ++f)
      for (int ord = 0; ord < n_nodes; ++ord) lp.bound_unit(vphix(x, ord, f));
  for (int u = 1; u <= n_users; ++u)
    for (int w = 1; w <= n_chans; ++w)
      for (int up = 1; up <= n_users; ++up) lp.bound_unit(vrho(u, up, w));
  for (int w = 1; w <= n_chans; ++w)
    for (int a = 1; a <= n_users; ++a)
      for (int b = a + 1; b <= n_users; ++b) lp.bound_unit(vrr(a, b, w));
  for (int u = 1; u <= n_users; ++u) {
    int u_ord = instance.ordinal_of(ue_node(u));
    for (int w = 1; w <= n_chans; ++w)
      for (int f = 1; f <= n_files; ++f) {
        lp.bound_unit(vomg(u, w, f));
        for (int x = 0; x < n_nodes; ++x)
          if (x != u_ord) lp.bound_unit(vomgx(u, w, f, x));
      }
  }
  for (int u = 1; u <= n_users; ++u) {
    int u_ord = instance.ordinal_of(ue_node(u));
    for (int up = 1; up <= n_users; ++up) {
      if (up == u) continue;
      int up_ord = instance.ordinal_of(ue_node(up));
      for (int w = 1; w <= n_chans; ++w)
        for (int f = 1; f <= n_files; ++f) {
          lp.bound_unit(vgam(u, up, w, f));
          for (int x = 0; x < n_nodes; ++x)
            if (x != u_ord && x != up_ord) lp.bound_unit(vgamx(u, up, w, f, x));
          for (int g = 1; g <= n_files; ++g) {
            if (g == f) continue;
            for (int y = 1; y < n_nodes; ++y)
              if (y != u_ord && y != up_ord)
                lp.bound_unit(vlam(u, up, w, f, g, y));
            for (int x = 0; x < n_nodes; ++x) {
              if (x == u_ord || x == up_ord) continue;
              for (int y = 0; y < n_nodes; ++y)
                if (y != u_ord && y != up_ord && y != x)
                  lp.bound_unit(vlamxy(u, up, w, f, g, x, y));
            }
          }
        }
    }
  }

  lp.section("Binaries");
  for (int u = 1; u <= n_users; ++u)
    for (int f = 1; f <= n_files; ++f) lp.binary(vx(u, f));
  for (int ord = 0; ord < n_nodes; ++ord)
    for (int f = 1; f <= n_files; ++f) lp.binary(vc(ord, f));
  for (int u = 1; u <= n_users; ++u)
    for (int w = 1; w <= n_chans; ++w) lp.binary(vr(u, w));

  lp.section("End");
  if (!out) throw std::runtime_error("emit_ilp: write failure on " + path);
  return stats;
}

std::map<std::string, double> ilp_variable_values(
    const NetworkInstance& instance, const Assignment& assignment) {
  const int n_nodes = instance.num_nodes();
  const int n_users = instance.num_ues();
  const int n_files = assignment.num_files();
  const int n_chans = assignment.num_channels();
  std::map<std::string, double> values;

  for (int u = 1; u <= n_users; ++u)
    for (int f = 1; f <= n_files; ++f)
      values[vx(u, f)] = assignment.delivered(u, f) ? 1.0 : 0.0;
  for (int ord = 0; ord < n_nodes; ++ord)
    for (int f = 1; f <= n_files; ++f)
      values[vc(ord, f)] = assignment.cached(ord, f) ? 1.0 : 0.0;
  for (int u = 1; u <= n_users; ++u)
    for (int w = 1; w <= n_chans; ++w)
      values[vr(u, w)] = assignment.channel(u, w) ? 1.0 : 0.0;

  for (int f = 1; f <= n_files; ++f)
    for (int ord = 0; ord < n_nodes; ++ord)
      values[vphi(ord, f)] = aux_phi(assignment, ord, f);
  for (int x = 0; x < n_nodes; ++x)
    for (int f = 1; f <= n_files; ++f)
      for (int ord = 0; ord < n_nodes; ++ord)
        values[vphix(x, ord, f)] = aux_phi_x(assignment, x, ord, f);
  for (int u = 1; u <= n_users; ++u)
    for (int w = 1; w <= n_chans; ++w)
      for (int up = 1; up <= n_users; ++up)
        values[vrho(u, up, w)] = aux_rho(assignment, u, up, w);
  for (int w = 1; w <= n_chans; ++w)
    for (int a = 1; a <= n_users; ++a)
      for (int b = a + 1; b <= n_users; ++b)
        values[vrr(a, b, w)] = (assignment.channel(a, w) ? 1.0 : 0.0) *
                               (assignment.channel(b, w) ? 1.0 : 0.0);

  auto rho_full = [&](int u, int w) {
    return aux_rho(assignment, u, n_users, w);
  };
  auto phi_full = [&](int f) { return aux_phi(assignment, n_nodes - 1, f); };
  auto phix_full = [&](int x, int f) {
    return aux_phi_x(assignment, x, n_nodes - 1, f);
  };

  for (int u = 1; u <= n_users; ++u) {
    int u_ord = instance.ordinal_of(ue_node(u));
    for (int w = 1; w <= n_chans; ++w)
      for (int f = 1; f <= n_files; ++f) {
        values[vomg(u, w, f)] = rho_full(u, w) * phi_full(f);
        for (int x = 0; x < n_nodes; ++x)
          if (x != u_ord)
            values[vomgx(u, w, f, x)] = rho_full(u, w) * phix_full(x, f);
      }
  }
  for (int u = 1; u <= n_users; ++u) {
    int u_ord = instance.ordinal_of(ue_node(u));
    for (int up = 1; up <= n_users; ++up) {
      if (up == u) continue;
      int up_ord = instance.ordinal_of(ue_node(up));
      for (int w = 1; w <= n_chans; ++w) {
        double rr = values[vrr(u, up, w)];
        for (int f = 1; f <= n_files; ++f) {
          double gam = rr * phi_full(f);
          values[vgam(u, up, w, f)] = gam;
          for (int x = 0; x < n_nodes; ++x)
            if (x != u_ord && x != up_ord)
              values[vgamx(u, up, w, f, x)] = rr * phix_full(x, f);
          for (int g = 1; g <= n_files; ++g) {
            if (g == f) continue;
            for (int y = 1; y < n_nodes; ++y)
              if (y != u_ord && y != up_ord)
                values[vlam(u, up, w, f, g, y)] = gam * phix_full(y, g);
            for (int x = 0; x < n_nodes; ++x) {
              if (x == u_ord || x == up_ord) continue;
              double gamx = values[vgamx(u, up, w, f, x)];
              for (int y = 0; y < n_nodes; ++y)
                if (y != u_ord && y != up_ord && y != x)
                  values[vlamxy(u, up, w, f, g, x, y)] =
                      gamx * phix_full(y, g);
            }
          }
        }
      }
    }
  }
  return values;
}

namespace {

struct Token {
  enum Kind { Name, Number, Op, Colon } kind;
  std::string text;
  double value = 0.0;
};

std::vector<Token> tokenize_lp(const std::string& content) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < content.size()) {
    char c = content[i];
    if (c == '\\') {  // comment to end of line
      while (i < content.size() && content[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == ':') {
      tokens.push_back({Token::Colon, ":", 0.0});
      ++i;
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < content.size() && content[i + 1] == '=') {
        ++i;
      }
      tokens.push_back({Token::Op, op, 0.0});
      ++i;
      continue;
    }
    if (c == '+' || c == '-') {
      tokens.push_back({Token::Op, std::string(1, c), 0.0});
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = i;
      while (end < content.size() &&
             (std::isdigit(static_cast<unsigned char>(content[end])) ||
              content[end] == '.' || content[end] == 'e' ||
              content[end] == 'E' ||
              ((content[end] == '+' || content[end] == '-') && end > i &&
               (content[end - 1] == 'e' || content[end - 1] == 'E'))))
        ++end;
      std::string text = content.substr(i, end - i);
      tokens.push_back({Token::Number, text, std::stod(text)});
      i = end;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = i;
      while (end < content.size() &&
             (std::isalnum(static_cast<unsigned char>(content[end])) ||
              content[end] == '_' || content[end] == '.'))
        ++end;
      tokens.push_back({Token::Name, content.substr(i, end - i), 0.0});
      i = end;
      continue;
    }
    throw std::runtime_error(std::string("parse_lp_file: stray character '") +
                             c + "'");
  }
  return tokens;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_section_keyword(const std::vector<Token>& tokens, std::size_t i,
                        std::string* section, std::size_t* consumed) {
  if (tokens[i].kind != Token::Name) return false;
  std::string word = lower(tokens[i].text);
  if (word == "maximize" || word == "maximise" || word == "max") {
    *section = "maximize";
    *consumed = 1;
    return true;
  }
  if (word == "minimize" || word == "minimise" || word == "min") {
    *section = "minimize";
    *consumed = 1;
    return true;
  }
  if (word == "subject" || word == "st" || word == "s.t." || word == "such") {
    *section = "constraints";
    *consumed = 1;
    if (i + 1 < tokens.size() && tokens[i + 1].kind == Token::Name &&
        (lower(tokens[i + 1].text) == "to" || lower(tokens[i + 1].text) == "that"))
      *consumed = 2;
    return true;
  }
  if (word == "bounds" || word == "bound") {
    *section = "bounds";
    *consumed = 1;
    return true;
  }
  if (word == "binaries" || word == "binary" || word == "bin") {
    *section = "binaries";
    *consumed = 1;
    return true;
  }
  if (word == "generals" || word == "general" || word == "gen" ||
      word == "integers" || word == "integer") {
    *section = "generals";
    *consumed = 1;
    return true;
  }
  if (word == "end") {
    *section = "end";
    *consumed = 1;
    return true;
  }
  return false;
}

}  // namespace

LpModel parse_lp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_lp_file: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::vector<Token> tokens = tokenize_lp(buffer.str());

  LpModel model;
  std::size_t i = 0;
  std::string section;
  std::size_t consumed = 0;
  if (i >= tokens.size() || !is_section_keyword(tokens, i, &section, &consumed) ||
      (section != "maximize" && section != "minimize"))
    throw std::runtime_error("parse_lp_file: expected an objective section");
  model.maximize = section == "maximize";
  i += consumed;

  // expression parser: [name :] (sign? number? name)* up to a sense op or
  // the next section keyword
  auto parse_expression = [&](std::vector<LpTerm>* terms,
                              std::string* row_name) {
    if (i + 1 < tokens.size() && tokens[i].kind == Token::Name &&
        tokens[i + 1].kind == Token::Colon) {
      std::string peek_section;
      std::size_t peek_consumed;
      if (!is_section_keyword(tokens, i, &peek_section, &peek_consumed)) {
        *row_name = tokens[i].text;
        i += 2;
      }
    }
    double sign = 1.0;
    bool have_coef = false;
    double coef = 1.0;
    while (i < tokens.size()) {
      const Token& tok = tokens[i];
      if (tok.kind == Token::Op && (tok.text == "+" || tok.text == "-")) {
        sign *= tok.text == "-" ? -1.0 : 1.0;
        ++i;
        continue;
      }
      if (tok.kind == Token::Number) {
        coef = tok.value;
        have_coef = true;
        ++i;
        continue;
      }
      if (tok.kind == Token::Name) {
        std::string peek_section;
        std::size_t peek_consumed;
        if (!have_coef && sign == 1.0 &&
            is_section_keyword(tokens, i, &peek_section, &peek_consumed))
          return;  // expression ends at the next section
        terms->push_back({sign * coef, tok.text});
        model.variables.insert(tok.text);
        sign = 1.0;
        coef = 1.0;
        have_coef = false;
        ++i;
        continue;
      }
      return;  // sense operator or colon ends the expression
    }
  };

  {
    std::string name;
    parse_expression(&model.objective, &name);
  }

  if (i >= tokens.size() || !is_section_keyword(tokens, i, &section, &consumed) ||
      section != "constraints")
    throw std::runtime_error("parse_lp_file: expected 'Subject To'");
  i += consumed;

  while (i < tokens.size()) {
    std::string peek_section;
    std::size_t peek_consumed;
    if (is_section_keyword(tokens, i, &peek_section, &peek_consumed) &&
        peek_section != "constraints") {
      section = peek_section;
      i += peek_consumed;
      break;
    }
    LpConstraint row;
    parse_expression(&row.terms, &row.name);
    if (i >= tokens.size() || tokens[i].kind != Token::Op)
      throw std::runtime_error("parse_lp_file: constraint without relation");
    row.sense = tokens[i].text[0];
    ++i;
    double sign = 1.0;
    if (i < tokens.size() && tokens[i].kind == Token::Op &&
        (tokens[i].text == "-" || tokens[i].text == "+")) {
      sign = tokens[i].text == "-" ? -1.0 : 1.0;
      ++i;
    }
    if (i >= tokens.size() || tokens[i].kind != Token::Number)
      throw std::runtime_error("parse_lp_file: constraint without rhs");
    row.rhs = sign * tokens[i].value;
    ++i;
    model.constraints.push_back(std::move(row));
  }

  while (section != "end" && i <= tokens.size()) {
    if (section == "bounds") {
      while (i < tokens.size()) {
        std::string peek_section;
        std::size_t peek_consumed;
        if (is_section_keyword(tokens, i, &peek_section, &peek_consumed)) {
          section = peek_section;
          i += peek_consumed;
          break;
        }
        // forms: lo <= var <= hi | var <= hi | var >= lo | var = v | var free
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        if (tokens[i].kind == Token::Number ||
            (tokens[i].kind == Token::Op &&
             (tokens[i].text == "-" || tokens[i].text == "+"))) {
          double sign = 1.0;
          if (tokens[i].kind == Token::Op) {
            sign = tokens[i].text == "-" ? -1.0 : 1.0;
            ++i;
          }
          lo = sign * tokens[i].value;
          ++i;
          if (tokens[i].kind != Token::Op)
            throw std::runtime_error("parse_lp_file: malformed bound");
          ++i;  // <=
        }
        if (tokens[i].kind != Token::Name)
          throw std::runtime_error("parse_lp_file: malformed bound");
        std::string var = tokens[i].text;
        model.variables.insert(var);
        ++i;
        if (i < tokens.size() && tokens[i].kind == Token::Name &&
            lower(tokens[i].text) == "free") {
          lo = -std::numeric_limits<double>::infinity();
          ++i;
        } else if (i < tokens.size() && tokens[i].kind == Token::Op &&
                   tokens[i].text != "+" && tokens[i].text != "-") {
          char op = tokens[i].text[0];
          ++i;
          double sign = 1.0;
          if (tokens[i].kind == Token::Op) {
            sign = tokens[i].text == "-" ? -1.0 : 1.0;
            ++i;
          }
          double v = sign * tokens[i].value;
          ++i;
          if (op == '<')
            hi = v;
          else if (op == '>')
            lo = v;
          else
            lo = hi = v;
        }
        model.bounds[var] = {lo, hi};
      }
    } else if (section == "binaries" || section == "generals") {
      bool binary = section == "binaries";
      while (i < tokens.size()) {
        std::string peek_section;
        std::size_t peek_consumed;
        if (is_section_keyword(tokens, i, &peek_section, &peek_consumed)) {
          section = peek_section;
          i += peek_consumed;
          break;
        }
        if (tokens[i].kind != Token::Name)
          throw std::runtime_error("parse_lp_file: malformed variable list");
        if (binary) model.binaries.insert(tokens[i].text);
        model.variables.insert(tokens[i].text);
        ++i;
      }
    } else {
      throw std::runtime_error("parse_lp_file: unsupported section " + section);
    }
    if (i >= tokens.size()) break;
  }
  return model;
}

double lp_objective_value(const LpModel& model,
                          const std::map<std::string, double>& values) {
  double total = 0.0;
  for (const LpTerm& term : model.objective) {
    auto it = values.find(term.variable);
    if (it == values.end())
      throw std::invalid_argument("lp_objective_value: missing variable " +
                                  term.variable);
    total += term.coefficient * it->second;
  }
  return total;
}

std::vector<LpViolation> lp_check_solution(
    const LpModel& model, const std::map<std::string, double>& values,
    double tolerance) {
  std::vector<LpViolation> out;
  for (const std::string& var : model.variables)
    if (values.find(var) == values.end())
      out.push_back({"missing variable " + var, 1.0});
  if (!out.empty()) return out;

  for (const LpConstraint& row : model.constraints) {
    double lhs = 0.0;
    for (const LpTerm& term : row.terms)
      lhs += term.coefficient * values.at(term.variable);
    double excess = 0.0;
    if (row.sense == '<')
      excess = lhs - row.rhs;
    else if (row.sense == '>')
      excess = row.rhs - lhs;
    else
      excess = std::abs(lhs - row.rhs);
    if (excess > tolerance) out.push_back({row.name, excess});
  }
  for (const auto& [var, lohi] : model.bounds) {
    double v = values.at(var);
    if (v < lohi.first - tolerance)
      out.push_back({"bound_lo " + var, lohi.first - v});
    if (v > lohi.second + tolerance)
      out.push_back({"bound_hi " + var, v - lohi.second});
  }
  for (const std::string& var : model.binaries) {
    double v = values.at(var);
    double nearest = std::round(v);
    if (std::abs(v - nearest) > tolerance || nearest < -tolerance ||
        nearest > 1.0 + tolerance)
      out.push_back({"binary " + var, std::abs(v - nearest)});
  }
  return out;
}

}  // namespace hetcache

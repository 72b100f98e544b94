#include "frost/velocity.hpp"

#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>

namespace frost {

namespace {

enum class NodeKind : unsigned char { Free, Wall, Obstacle };

struct NodeProblem {
  int nxn = 0, nyn = 0;  // node counts per direction
  std::vector<NodeKind> kind;
  std::vector<double> value;  // Dirichlet data where kind != Free

  int id(int i, int j) const { return j * nxn + i; }
};

// Dirichlet stream-function values along the domain boundary. The duct wall
// ramps linearly node-to-node across the snapped inlet and outlet spans and
// holds -/+ Q between them; the other three walls form one psi = 0 run.
void set_wall_values(const StructuredGrid& g, double u_in, NodeProblem& p) {
  const int nx = g.nx, ny = g.ny;
  const double sign = g.snapped.duct_wall == DuctWall::Left ? -1.0 : 1.0;
  const double y_top = g.y_faces[ny];
  const double h_in = y_top - g.y_faces[g.inlet_j_begin];
  const double h_out = g.y_faces[g.outlet_j_end] - g.y_faces[0];
  const double q = u_in * h_in;
  const int i_duct = g.snapped.duct_wall == DuctWall::Left ? 0 : nx;

  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      if (i != 0 && i != nx && j != 0 && j != ny) continue;
      const int n = p.id(i, j);
      p.kind[n] = NodeKind::Wall;
      double psi = 0.0;
      if (i == i_duct && j > 0 && j < ny) {
        if (j >= g.inlet_j_begin) {
          psi = sign * u_in * (y_top - g.y_faces[j]);
        } else if (j <= g.outlet_j_end) {
          psi = sign * q * (g.y_faces[j] - g.y_faces[0]) / h_out;
        } else {
          psi = sign * q;
        }
      }
      p.value[n] = psi;
    }
  }
}

void mark_obstacle_nodes(const StructuredGrid& g, NodeProblem& p) {
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const int n = p.id(i, j);
      if (p.kind[n] == NodeKind::Wall) continue;
      bool solid = false;
      for (int dj = -1; dj <= 0 && !solid; ++dj) {
        for (int di = -1; di <= 0 && !solid; ++di) {
          const int ci = i + di, cj = j + dj;
          if (ci < 0 || ci >= g.nx || cj < 0 || cj >= g.ny) continue;
          solid = g.label(ci, cj) != CellLabel::Fluid;
        }
      }
      if (solid) p.kind[n] = NodeKind::Obstacle;
    }
  }
}

// Plain CG on the 5-point Laplacian over Free nodes, Dirichlet elsewhere.
// psi carries the initial guess in and the solution out.
int solve_laplace(const NodeProblem& p, double wx, double wy, std::vector<double>& psi) {
  std::vector<int> unknown_of(p.kind.size(), -1);
  std::vector<int> node_of;
  for (std::size_t n = 0; n < p.kind.size(); ++n) {
    if (p.kind[n] == NodeKind::Free) {
      unknown_of[n] = static_cast<int>(node_of.size());
      node_of.push_back(static_cast<int>(n));
    }
  }
  const std::size_t m = node_of.size();
  if (m == 0) return 0;

  const double diag = 2.0 * (wx + wy);
  const int nxn = p.nxn;
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t k = 0; k < m; ++k) {
      const int n = node_of[k];
      double v = diag * x[k];
      const int nbs[4] = {n - 1, n + 1, n - nxn, n + nxn};
      const double w[4] = {wx, wx, wy, wy};
      for (int q = 0; q < 4; ++q) {
        const int u = unknown_of[nbs[q]];
        if (u >= 0) v -= w[q] * x[u];
      }
      y[k] = v;
    }
  };

  std::vector<double> b(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const int n = node_of[k];
    const int nbs[4] = {n - 1, n + 1, n - nxn, n + nxn};
    const double w[4] = {wx, wx, wy, wy};
    for (int q = 0; q < 4; ++q) {
      if (unknown_of[nbs[q]] < 0) b[k] += w[q] * psi[nbs[q]];
    }
  }

  std::vector<double> x(m), r(m), pk(m), ap(m);
  for (std::size_t k = 0; k < m; ++k) x[k] = psi[node_of[k]];
  apply(x, ap);
  for (std::size_t k = 0; k < m; ++k) r[k] = b[k] - ap[k];
  const double bnorm = std::sqrt(kernels::det_dot(b.data(), b.data(), m));
  const double tol = 1e-13 * (bnorm > 0.0 ? bnorm : 1.0);
  double rs = kernels::det_dot(r.data(), r.data(), m);
  int iters = 0;
  if (std::sqrt(rs) > tol) {
    pk = r;
    const int max_iters = 200 * (p.nxn + p.nyn);
    for (; iters < max_iters; ++iters) {
      apply(pk, ap);
      const double alpha = rs / kernels::det_dot(pk.data(), ap.data(), m);
      for (std::size_t k = 0; k < m; ++k) x[k] += alpha * pk[k];
      for (std::size_t k = 0; k < m; ++k) r[k] -= alpha * ap[k];
      const double rs_new = kernels::det_dot(r.data(), r.data(), m);
      if (std::sqrt(rs_new) <= tol) {
        rs = rs_new;
        ++iters;
        break;
      }
      const double beta = rs_new / rs;
      rs = rs_new;
      for (std::size_t k = 0; k < m; ++k) pk[k] = r[k] + beta * pk[k];
    }
    if (std::sqrt(rs) > tol) {
      throw std::runtime_error("stream-function solve did not converge");
    }
  }
  for (std::size_t k = 0; k < m; ++k) psi[node_of[k]] = x[k];
  return iters;
}

}  // namespace

void check_fluid_connectivity(const StructuredGrid& grid) {
  const int nx = grid.nx, ny = grid.ny;
  const int i_in = grid.snapped.duct_wall == DuctWall::Left ? 0 : nx - 1;
  std::vector<char> seen(grid.cell_count(), 0);
  std::queue<int> q;
  for (int j = grid.inlet_j_begin; j < grid.inlet_j_end; ++j) {
    const int c = grid.idx(i_in, j);
    if (!grid.is_solid(c) && !seen[c]) {
      seen[c] = 1;
      q.push(c);
    }
  }
  if (q.empty()) throw std::runtime_error("no fluid cell adjacent to the inlet");
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    const int i = c % nx, j = c / nx;
    const int ni[4] = {i - 1, i + 1, i, i};
    const int nj[4] = {j, j, j - 1, j + 1};
    for (int k = 0; k < 4; ++k) {
      if (ni[k] < 0 || ni[k] >= nx || nj[k] < 0 || nj[k] >= ny) continue;
      const int nc = grid.idx(ni[k], nj[k]);
      if (!grid.is_solid(nc) && !seen[nc]) {
        seen[nc] = 1;
        q.push(nc);
      }
    }
  }
  int missed = 0;
  for (int c = 0; c < grid.cell_count(); ++c) {
    if (!grid.is_solid(c) && !seen[c]) ++missed;
  }
  if (missed > 0) {
    throw std::runtime_error(std::to_string(missed) +
                             " fluid cells are not connected to the inlet");
  }
}

StreamFunctionResult build_duct_flow(const StructuredGrid& grid, double u_in) {
  check_fluid_connectivity(grid);

  StreamFunctionResult res;
  res.velocity = VelocityField::zero(grid);
  const int nx = grid.nx, ny = grid.ny;
  NodeProblem p;
  p.nxn = nx + 1;
  p.nyn = ny + 1;
  p.kind.assign(static_cast<std::size_t>(p.nxn) * p.nyn, NodeKind::Free);
  p.value.assign(p.kind.size(), 0.0);
  set_wall_values(grid, u_in, p);

  res.psi = p.value;
  if (u_in == 0.0) return res;  // all Dirichlet data zero, field is zero

  const double wx = grid.dy() / grid.dx();
  const double wy = grid.dx() / grid.dy();

  res.cg_iterations_first = solve_laplace(p, wx, wy, res.psi);

  mark_obstacle_nodes(grid, p);
  double sum = 0.0;
  int count = 0;
  for (std::size_t n = 0; n < p.kind.size(); ++n) {
    if (p.kind[n] == NodeKind::Obstacle) {
      sum += res.psi[n];
      ++count;
    }
  }
  if (count > 0) {
    res.obstacle_psi = sum / count;
    for (std::size_t n = 0; n < p.kind.size(); ++n) {
      if (p.kind[n] == NodeKind::Obstacle) res.psi[n] = res.obstacle_psi;
    }
    res.cg_iterations_second = solve_laplace(p, wx, wy, res.psi);
  }

  VelocityField& vel = res.velocity;
  const double dx = grid.dx(), dy = grid.dy();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vel.u[vel.xf(i, j)] = (res.psi[p.id(i, j + 1)] - res.psi[p.id(i, j)]) / dy;
    }
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      vel.v[vel.yf(i, j)] = -(res.psi[p.id(i + 1, j)] - res.psi[p.id(i, j)]) / dx;
    }
  }
  vel.inlet_flux = u_in * (grid.y_faces[ny] - grid.y_faces[grid.inlet_j_begin]);
  return res;
}

double max_divergence(const StructuredGrid& grid, const VelocityField& vel) {
  double worst = 0.0;
  const double dx = grid.dx(), dy = grid.dy();
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double div = dy * (vel.u[vel.xf(i + 1, j)] - vel.u[vel.xf(i, j)]) +
                         dx * (vel.v[vel.yf(i, j + 1)] - vel.v[vel.yf(i, j)]);
      worst = std::max(worst, std::abs(div));
    }
  }
  return worst;
}

}  // namespace frost

// Copyright 2026 The morris-twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "context.hpp"
#include "twin/info/schema.hpp"
#include "twin/morris/notation.hpp"

namespace twin::orch::detail {

namespace schema = info::schema;

void DataAggregator::register_cell(ConnId conn, const proto::RegisterCell& body,
                                   std::uint64_t re) {
  if (!schema::valid_cell_id(body.cell_id)) {
    ctx_.error(conn, proto::error_code::kBadRequest, "invalid cell id '" + body.cell_id + "'", re);
    return;
  }
  Session& session = ctx_.sessions.at(conn);
  if (session.cell_id && *session.cell_id != body.cell_id) {
    ctx_.error(conn, proto::error_code::kNotAllowed,
               "connection already registered as " + *session.cell_id, re);
    return;
  }
  auto it = ctx_.cells.find(body.cell_id);
  if (it == ctx_.cells.end()) {
    schema::define_cell_nodes(ctx_.space, body.cell_id, body.platform,
                              morris::encode_state(morris::initial_state()));
    it = ctx_.cells.emplace(body.cell_id, Cell{}).first;
    it->second.platform = body.platform;
  } else if (it->second.conn && *it->second.conn != conn) {
    // Newest connection wins; the old one is treated as lost.
    const ConnId old = *it->second.conn;
    executor_.cell_lost(body.cell_id);
    ctx_.close(old);
  }
  Cell& cell = it->second;
  cell.conn = conn;
  cell.missed_pongs = 0;
  cell.resyncs = 0;
  cell.platform = body.platform;
  ctx_.space.write_if_changed(schema::cell_platform(body.cell_id), body.platform);
  session.cell_id = body.cell_id;
  ctx_.set_cell_status(body.cell_id, cell, "registered");
  ctx_.send(conn, proto::RegisterAck{body.cell_id}, re);
  executor_.resync_cell(body.cell_id, 0);
}

void DataAggregator::on_report(ConnId conn, const proto::CellStateReport& report,
                               std::uint64_t re) {
  auto it = ctx_.cells.find(report.cell_id);
  if (it == ctx_.cells.end() || it->second.conn != conn) {
    ctx_.error(conn, proto::error_code::kUnknownCell,
               "cell '" + report.cell_id + "' is not registered on this connection", re);
    return;
  }
  Process* p = nullptr;
  if (report.pid != 0) {
    auto pit = ctx_.processes.find(report.pid);
    if (pit == ctx_.processes.end()) {
      ctx_.error(conn, proto::error_code::kUnknownProcess,
                 "no process " + std::to_string(report.pid), re);
      return;
    }
    p = &pit->second;
  }

  Cell& cell = it->second;
  const std::string& id = report.cell_id;
  cell.last_report_digest = report.digest;
  ctx_.space.write_node(schema::cell_last_report(id), info::StateBlob{report.state});
  const bool match = report.digest == ctx_.digest;
  if (match) cell.resyncs = 0;
  ctx_.set_cell_status(id, cell, match ? "synced" : "diverged");

  bool live = false;
  if (p && !is_terminal(p->state) && p->pending.count(id) > 0) {
    live = true;
    if (match) {
      p->pending.erase(id);
      p->confirmed.insert(id);
      ctx_.fire(*p, p->pending.empty() ? ProcEvent::ConfirmLast : ProcEvent::Confirm);
    } else if (++p->divergences[id] > ctx_.config.divergence_limit) {
      p->reason = "cell-fault:" + id;
      ctx_.fire(*p, ProcEvent::CellFault);
      live = false;
    } else {
      ctx_.fire(*p, ProcEvent::Diverge);
    }
  } else if (p && is_terminal(p->state)) {
    ctx_.fire(*p, match ? ProcEvent::Confirm : ProcEvent::Diverge);
  }

  if (!match) {
    if (cell.resyncs < ctx_.config.divergence_limit) {
      executor_.resync_cell(id, live ? p->pid : 0);
    } else {
      ctx_.note("cell " + id + ": still diverged after " + std::to_string(cell.resyncs) +
                " resyncs");
    }
  }
}

}  // namespace twin::orch::detail

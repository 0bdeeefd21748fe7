#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "genmine/annotation.hpp"

namespace genmine {

namespace {

constexpr const char* kBuiltinPage = R"html(<!doctype html>
<html><head><meta charset="utf-8"><title>genmine annotation</title>
<style>
body{font-family:sans-serif;max-width:46em;margin:2em auto}
#sentence{font-size:1.3em;margin:1em 0}
#context{color:#555;white-space:pre-wrap;font-size:.9em}
button{font-size:1.1em;margin-right:.5em}
</style></head>
<body>
<p><label>annotator <input id="who" value="a1"></label> <button id="go">load</button> <span id="progress"></span></p>
<div id="sentence"></div>
<details><summary>context</summary><div id="context"></div></details>
<p><button data-l="Generic">Generic (G)</button><button data-l="Particular">Particular (P)</button><button data-l="Unclear">Unclear (U)</button></p>
<pre id="report"></pre>
<script>
let items=[],k=0;
const $=id=>document.getElementById(id);
function show(){
  $('progress').textContent=Math.min(k,items.length)+' / '+items.length;
  if(k>=items.length){$('sentence').textContent='done';$('context').textContent='';report();return;}
  $('sentence').textContent=items[k].sentence;$('context').textContent=items[k].context_excerpt;
}
async function load(){
  const r=await fetch('/api/batch?annotator='+encodeURIComponent($('who').value));
  items=await r.json();k=items.findIndex(i=>!i.label);if(k<0)k=items.length;show();
}
async function send(label){
  if(k>=items.length)return;
  const body={record_id:items[k].record_id,annotator_id:$('who').value,label};
  const r=await fetch('/api/label',{method:'POST',headers:{'Content-Type':'application/json'},body:JSON.stringify(body)});
  if(r.ok){items[k].label=label;k++;show();}
}
async function report(){const r=await fetch('/api/report');$('report').textContent=JSON.stringify(await r.json(),null,2);}
document.querySelectorAll('button[data-l]').forEach(b=>b.onclick=()=>send(b.dataset.l));
document.addEventListener('keydown',e=>{const m={g:'Generic',p:'Particular',u:'Unclear'}[e.key.toLowerCase()];if(m&&e.target.tagName!=='INPUT')send(m);});
$('go').onclick=load;
</script></body></html>
)html";

void reply_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

}  // namespace

struct AnnotationServer::Impl {
  httplib::Server server;
  std::thread thread;
};

AnnotationServer::AnnotationServer(AnnotationServerConfig config)
    : config_(std::move(config)),
      batch_(load_annotation_batch(config_.run_dir, config_.n, config_.seed)),
      log_(config_.run_dir / "annotations" / "labels.jsonl"),
      impl_(std::make_unique<Impl>()) {
  for (std::size_t i = 0; i < batch_.size(); ++i) index_[batch_[i].record_id] = i;

  auto& svr = impl_->server;
  svr.Get("/api/batch", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string who = req.has_param("annotator") ? req.get_param_value("annotator") : std::string();
    nlohmann::json out = nlohmann::json::array();
    for (const auto& item : batch_) {
      nlohmann::json j = {{"record_id", item.record_id},
                          {"sentence", item.sentence},
                          {"context_excerpt", item.context_excerpt},
                          {"label", nullptr}};
      if (!who.empty()) {
        if (auto l = log_.label_of(item.record_id, who)) j["label"] = std::string(judgment_name(*l));
      }
      out.push_back(std::move(j));
    }
    reply_json(res, 200, out);
  });

  svr.Post("/api/label", [this](const httplib::Request& req, httplib::Response& res) {
    auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
      reply_json(res, 400, {{"error", "bad-json"}});
      return;
    }
    auto label = label_from_json(body);
    if (!label.ok()) {
      reply_json(res, 400, {{"error", label.error().reason}, {"detail", label.error().detail}});
      return;
    }
    if (index_.count(label->record_id) == 0) {
      reply_json(res, 404, {{"error", "unknown-record"}, {"detail", label->record_id}});
      return;
    }
    const bool overwrite = log_.record(*label);
    reply_json(res, 200, {{"ok", true}, {"overwrite", overwrite}, {"timestamp", label->timestamp}});
  });

  svr.Get("/api/report", [this](const httplib::Request&, httplib::Response& res) {
    nlohmann::json j = to_json(log_.report());
    j["batch_size"] = batch_.size();
    j["log_lines"] = log_.lines();
    j["overwrites"] = log_.overwrites();
    reply_json(res, 200, j);
  });

  if (!config_.ui_dir.empty()) {
    if (!svr.set_mount_point("/", config_.ui_dir.string())) {
      throw std::runtime_error("ui directory not found: " + config_.ui_dir.string());
    }
  } else {
    svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kBuiltinPage, "text/html; charset=utf-8");
    });
  }
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind() {
  auto& svr = impl_->server;
  if (config_.port == 0) {
    port_ = svr.bind_to_any_port(config_.host);
  } else {
    port_ = svr.bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ <= 0) throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  return port_;
}

void AnnotationServer::listen() { impl_->server.listen_after_bind(); }

int AnnotationServer::start() {
  const int port = bind();
  impl_->thread = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
  return port;
}

void AnnotationServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace genmine

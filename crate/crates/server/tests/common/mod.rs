#![allow(dead_code)]

use std::net::SocketAddr;
use std::sync::Arc;

use serde_json::Value;
use ss3::{Hyperparameters, LabeledCorpus, Model};
use ss3_server::{LiveTest, ServerConfig};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::{TcpListener, TcpStream};

pub fn model() -> Model {
    let mut model = Model::new(Hyperparameters::default()).unwrap();
    model.fit([
        ("The striker scored a late goal. The team celebrated the win!", "sports"),
        ("Coach praised the defence after the league match.", "sports"),
        ("The new chip doubles phone battery life.", "tech"),
        ("Cloud servers run the code and the app syncs.", "tech"),
        ("Bake the bread, then spread butter and jam.", "food"),
        ("Fresh fruit and sweet apple pie for dessert.", "food"),
    ]);
    model
}

pub fn test_set() -> LabeledCorpus {
    let mut corpus = LabeledCorpus::default();
    corpus.push("A late goal won the match.", "sports");
    corpus.push("The new phone chip and cloud code.", "sports");
    corpus.push("Servers run code.", "tech");
    corpus.push("Apple pie with jam.", "food");
    corpus
}

pub async fn start(state: Arc<LiveTest>) -> SocketAddr {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(ss3_server::serve(listener, state));
    addr
}

pub async fn start_default() -> SocketAddr {
    start(LiveTest::new(model(), test_set(), ServerConfig::default()).unwrap()).await
}

pub struct Reply {
    pub status: u16,
    pub headers: String,
    pub body: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.body).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.body))
    }
}

/// Minimal HTTP/1.1 client: one request per connection.
pub async fn request(addr: SocketAddr, method: &str, path: &str, body: Option<&str>) -> Reply {
    let mut stream = TcpStream::connect(addr).await.unwrap();
    let body = body.unwrap_or("");
    let req = format!(
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(req.as_bytes()).await.unwrap();
    let mut raw = Vec::new();
    stream.read_to_end(&mut raw).await.unwrap();
    let raw = String::from_utf8(raw).unwrap();
    let (head, body) = raw.split_once("\r\n\r\n").unwrap();
    let status = head.split(' ').nth(1).unwrap().parse().unwrap();
    Reply {
        status,
        headers: head.to_owned(),
        body: body.to_owned(),
    }
}

/// Same keys at every level; arrays are checked element-wise against the
/// fixture's first element.
pub fn assert_same_shape(actual: &Value, fixture: &Value, at: &str) {
    match (actual, fixture) {
        (Value::Object(a), Value::Object(f)) => {
            let mut ak: Vec<_> = a.keys().collect();
            let mut fk: Vec<_> = f.keys().collect();
            ak.sort();
            fk.sort();
            assert_eq!(ak, fk, "keys differ at {at}");
            for (k, v) in a {
                assert_same_shape(v, &f[k], &format!("{at}.{k}"));
            }
        }
        (Value::Array(a), Value::Array(f)) => {
            if let Some(first) = f.first() {
                for (i, v) in a.iter().enumerate() {
                    assert_same_shape(v, first, &format!("{at}[{i}]"));
                }
            }
        }
        (Value::Number(_), Value::Number(_))
        | (Value::String(_), Value::String(_))
        | (Value::Bool(_), Value::Bool(_))
        | (Value::Null, Value::Null) => {}
        _ => panic!("type differs at {at}: {actual} vs {fixture}"),
    }
}

pub fn fixture(name: &str) -> Value {
    let path = format!("{}/tests/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use abvar_lmfdb::{
    bundled_labels, fetch_class, label_to_polynomial, ClientConfig, IsogenyClassLabel, LmfdbConfig, LmfdbError,
    Resolver, SourceTag,
};

/// Serves canned bodies keyed by label; `fail_first` requests get a 503.
fn mock_server(bodies: Vec<(&'static str, String)>, fail_first: usize) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            reader.read_line(&mut request_line).unwrap();
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap() == 0 || line == "\r\n" {
                    break;
                }
            }
            let n = counter.fetch_add(1, Ordering::SeqCst);
            let (status, body) = if n < fail_first {
                ("503 Service Unavailable", String::new())
            } else {
                match bodies.iter().find(|(label, _)| request_line.contains(&format!("label={label}&"))) {
                    Some((_, body)) => ("200 OK", body.clone()),
                    None => ("200 OK", r#"{"data":[]}"#.to_string()),
                }
            };
            let _ = write!(
                stream,
                "HTTP/1.1 {status}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
                body.len()
            );
        }
    });
    (format!("http://{addr}"), hits)
}

fn live_config(base_url: String, cache: &std::path::Path) -> LmfdbConfig {
    LmfdbConfig {
        offline: false,
        cache_dir: Some(cache.to_path_buf()),
        client: ClientConfig { base_url, timeout: Duration::from_secs(5), retries: 3, backoff: Duration::from_millis(5) },
        max_concurrency: 4,
    }
}

#[test]
fn every_bundled_label_validates() {
    let labels = bundled_labels();
    assert_eq!(labels.len(), 37);
    for label in labels {
        let rec = fetch_class(label, &LmfdbConfig::offline()).unwrap();
        assert_eq!(rec.source, SourceTag::Fixture);
        let weil = rec.polynomial().unwrap();
        let parsed: IsogenyClassLabel = label.parse().unwrap();
        assert_eq!(weil, label_to_polynomial(&parsed).unwrap());
    }
}

#[test]
fn offline_miss_explains_itself() {
    let err = fetch_class("2.5.a_a", &LmfdbConfig::offline()).unwrap_err();
    match err {
        LmfdbError::NetworkUnavailable(msg) => assert!(msg.contains("offline")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(fetch_class("9.2.x", &LmfdbConfig::offline()), Err(LmfdbError::MalformedLabel { .. })));
}

#[test]
fn live_fetch_is_validated_and_persisted() {
    let body = r#"{"data":[{"label":"3.7.ak_bw_afv","poly":[1,-10,48,-151,336,-490,343],"angle_rank":3,"p_rank":3,"galois_groups":["6T3"]}]}"#;
    let (url, hits) = mock_server(vec![("3.7.ak_bw_afv", body.to_string())], 2);
    let cache = tempfile::tempdir().unwrap();
    // the bundled copy would win, so use a label family the server knows and
    // point the cache at a scratch directory
    let resolver = Resolver::new(live_config(url.clone(), cache.path()));
    let rec = resolver.fetch_class("3.7.ak_bw_afv").unwrap();
    assert_eq!(rec.source, SourceTag::Fixture, "bundled record precedes the network");
    assert_eq!(hits.load(Ordering::SeqCst), 0);

    let missing = r#"{"data":[{"label":"2.5.a_a","poly":[1,0,0,0,25],"p_rank":0}]}"#;
    let (url, hits) = mock_server(vec![("2.5.a_a", missing.to_string())], 2);
    let resolver = Resolver::new(live_config(url.clone(), cache.path()));
    let rec = resolver.fetch_class("2.5.a_a").unwrap();
    assert_eq!(rec.source, SourceTag::Live);
    assert_eq!(rec.metadata.p_rank, Some(0));
    assert_eq!(hits.load(Ordering::SeqCst), 3, "two 503s then success");
    let path = cache.path().join("2.5").join("2.5.a_a.txt");
    let stored = std::fs::read_to_string(&path).unwrap();
    assert_eq!(stored, rec.to_canonical_text());

    // a fresh resolver reads the disk copy without touching the network
    let again = Resolver::new(live_config(url, cache.path())).fetch_class("2.5.a_a").unwrap();
    assert_eq!(again, rec);
    assert_eq!(again.to_canonical_text(), stored);
    assert_eq!(hits.load(Ordering::SeqCst), 3);
}

#[test]
fn remote_disagreement_is_fatal_and_not_cached() {
    let lying = r#"{"data":[{"label":"2.5.ab_a","poly":[1,-1,0,-5,26]}]}"#;
    let (url, _) = mock_server(vec![("2.5.ab_a", lying.to_string())], 0);
    let cache = tempfile::tempdir().unwrap();
    let err = Resolver::new(live_config(url, cache.path())).fetch_class("2.5.ab_a").unwrap_err();
    assert!(matches!(err, LmfdbError::RemoteMismatch { .. }), "{err:?}");
    assert!(!cache.path().join("2.5").join("2.5.ab_a.txt").exists());
}

#[test]
fn unknown_label_and_dead_server() {
    let (url, _) = mock_server(vec![], 0);
    let cache = tempfile::tempdir().unwrap();
    let err = Resolver::new(live_config(url, cache.path())).fetch_class("2.5.ac_f").unwrap_err();
    assert!(matches!(err, LmfdbError::NotFound(_)), "{err:?}");

    // bind then drop to get a port nobody listens on
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut config = live_config(format!("http://127.0.0.1:{port}"), cache.path());
    config.client.retries = 1;
    let err = Resolver::new(config).fetch_class("2.5.ac_f").unwrap_err();
    assert!(matches!(err, LmfdbError::NetworkUnavailable(_)), "{err:?}");
}

#[test]
fn fetch_many_keeps_input_order() {
    let labels = ["1.2.ab", "2.2.ac_d", "9.2.x", "3.19.a_j_acm", "1.19.i"];
    let resolver = Resolver::new(LmfdbConfig::offline());
    let out = resolver.fetch_many(&labels);
    assert_eq!(out.len(), labels.len());
    for (label, res) in labels.iter().zip(&out) {
        match res {
            Ok(rec) => assert_eq!(&rec.label, label),
            Err(e) => assert_eq!(*label, "9.2.x", "{e}"),
        }
    }
}

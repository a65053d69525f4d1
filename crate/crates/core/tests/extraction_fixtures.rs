use knowsearch::extract::sentence_elements;
use serde_json::Value;

fn fixtures() -> Vec<(String, Vec<String>)> {
    let v: Value = serde_json::from_str(include_str!("data/extraction_fixtures.json")).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|f| {
            let text = f["text"].as_str().unwrap().to_string();
            let expected = f["expected"]
                .as_array()
                .unwrap()
                .iter()
                .map(|k| k.as_str().unwrap().to_string())
                .collect();
            (text, expected)
        })
        .collect()
}

fn extracted(text: &str) -> Vec<String> {
    sentence_elements(text, None)
        .into_iter()
        .flatten()
        .map(|ke| ke.key)
        .collect()
}

#[test]
fn twenty_hand_checked_sentences() {
    let all = fixtures();
    assert_eq!(all.len(), 20);
    let failures: Vec<String> = all
        .iter()
        .filter(|(text, expected)| &extracted(text) != expected)
        .map(|(text, expected)| format!("{text:?}: got {:?}, want {expected:?}", extracted(text)))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

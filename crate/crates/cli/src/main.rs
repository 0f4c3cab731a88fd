fn main() {
    let outcome = stable_pairs_cli::run(std::env::args_os());
    match outcome.output.get("text").and_then(|t| t.as_str()) {
        Some(help) if outcome.output["status"] == "help" => print!("{help}"),
        _ => println!("{}", serde_json::to_string_pretty(&outcome.output).expect("JSON values serialize")),
    }
    std::process::exit(outcome.code);
}

//! Drive the command-line front end in-process, as the `totref` binary
//! does.
//!
//!     cargo run --example cli_session

fn main() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../..");
    let pair = format!("{root}/pairs/f5_xy.json");
    let z9 = format!("{root}/rings/z9.json");
    let runs: [Vec<&str>; 3] = [
        vec!["pair", "verify", "--ring", &z9, "--x", "3", "--y", "3"],
        vec!["hom", "compute", "--pair", &pair, "--source", "H:z", "--target", "G:z^2"],
        vec!["hom", "verify-end", "--ring", &z9, "--x", "3", "--y", "3", "--a", "3"],
    ];
    for args in runs {
        println!("$ totref {}", args.join(" "));
        let mut out = std::io::stdout();
        let mut err = std::io::stdout();
        let code = totref::cli::run(std::iter::once("totref").chain(args), &mut out, &mut err);
        println!("exit {code}\n");
    }
}

use noncoherent_ic::validate::{run, Level};

fn main() {
    let checks = run(Level::Fast, 1);
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", checks.len());
}

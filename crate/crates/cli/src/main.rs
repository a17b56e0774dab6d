fn main() {
    println!("hadic");
}

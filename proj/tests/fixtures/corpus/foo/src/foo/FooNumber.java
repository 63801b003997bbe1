package foo;

public class FooNumber {
  private int x;
  FooNumber(int _x) { x = _x; }
  private void print() {
    System.out.println("It is number " + x)
  }
  public static void main(String[] args) {
    new FooNumber(Integer.parseInt(args[0])).print();
  }
}

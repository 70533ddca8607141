public interface ISecondary extends ITop {
    public default void func() {
    }
}
